#include "schrscale/series.hpp"

#include <cmath>
#include <stdexcept>

namespace schrscale {

namespace {

constexpr long kMaxExplicitTerms = 1L << 26;

double choose(int k, int j) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c = c * double(k - i) / double(i + 1);
    return c;
}

} // namespace

double EnergyLaw::at(long n) const {
    return scale * ipow(double(n), degree) + shift;
}

double ipow(double base, int exponent) {
    if (exponent < 0) return 1.0 / ipow(base, -exponent);
    double r = 1.0;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

Interval pseries_tail(double p, long N) {
    if (!(p > 1.0)) throw std::invalid_argument("pseries_tail needs p > 1");
    if (N < 1) throw std::invalid_argument("pseries_tail needs N >= 1");
    const double lo = std::pow(double(N) + 1.0, 1.0 - p) / (p - 1.0);
    const double hi = std::pow(double(N), 1.0 - p) / (p - 1.0);
    return {lo, std::max(lo, hi)};
}

Interval power_tail_bracket(const EnergyLaw& law, int k, double q, long N) {
    if (law.scale <= 0.0 || law.shift < 0.0 || (law.degree != 1 && law.degree != 2))
        throw std::invalid_argument("unsupported energy law");
    if (!(q - double(law.degree * k) > 1.0))
        throw std::invalid_argument("power_tail_bracket called on a divergent series");

    if (k >= 0) {
        Interval total = Interval::point(0.0);
        for (int j = 0; j <= k; ++j) {
            const double coeff =
                choose(k, j) * ipow(law.scale, j) * (k - j == 0 ? 1.0 : ipow(law.shift, k - j));
            if (coeff == 0.0) continue;
            total += pseries_tail(q - double(law.degree * j), N).scaled(coeff);
        }
        return total;
    }

    const int m = -k;
    const Interval core = pseries_tail(q + double(law.degree * m), N).scaled(ipow(law.scale, -m));
    const double u = law.shift / (law.scale * ipow(double(N) + 1.0, law.degree));
    const double factor_lo = std::max(0.0, 1.0 - double(m) * u);
    return {core.lo * factor_lo, core.hi};
}

Interval power_weighted_tail(const EnergyLaw& law, int k, double q, long n_begin,
                             double abs_tol) {
    if (n_begin < 1) throw std::invalid_argument("weighted tail starts at n >= 1");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (power_tail_diverges(law, k, 0.5 * q))
        throw std::invalid_argument("power_weighted_tail called on a divergent series");

    KahanSum head;
    long summed_through = n_begin - 1;
    long target = std::max(n_begin + 63, long(64));

    for (;;) {
        for (long n = summed_through + 1; n <= target; ++n)
            head.add(std::pow(double(n), -q) * ipow(law.at(n), k));
        summed_through = target;

        const Interval tail = power_tail_bracket(law, k, q, summed_through);
        if (tail.width() <= abs_tol || summed_through >= kMaxExplicitTerms)
            return Interval::point(head.value()) + tail;
        target = summed_through * 2;
    }
}

double divergence_witness(const EnergyLaw& law, int k, double s) {
    return double(law.degree * k) - 2.0 * s;
}

bool power_tail_diverges(const EnergyLaw& law, int k, double s) {
    return divergence_witness(law, k, s) >= -1.0;
}

} // namespace schrscale
