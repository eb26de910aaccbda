#include "schrscale/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "schrscale/errors.hpp"

namespace schrscale {

namespace {

constexpr long kMaxExplicitTailTerms = 1L << 24;

// phi(theta) = theta^2 + 2 - 2 cos(theta) - 2 theta sin(theta).  Direct
// evaluation cancels catastrophically for small theta (the value is
// theta^4 / 4 against operands of size 2), so below theta = 1 we switch to
// the alternating series  sum_{k>=2} 2 (-1)^k (2k-1) / (2k)! theta^(2k),
// summed far past double precision.
double phi_of(double theta) {
    const double a = std::abs(theta);
    if (a > 1.0) return theta * theta + 2.0 - 2.0 * std::cos(a) - 2.0 * a * std::sin(a);
    const double t2 = a * a;
    double power = t2 * t2;        // theta^(2k) at k = 2
    double factorial = 24.0;       // (2k)! at k = 2
    double sum = 0.0;
    for (int k = 2; k <= 10; ++k) {
        const double term = 2.0 * (2.0 * k - 1.0) / factorial * power;
        sum += (k % 2 == 0) ? term : -term;
        power *= t2;
        factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum;
}

// Bracket on sum_{n > N} n^(-2s) phi(E_n h) / h^2.  The elementary bound
// |2 - 2 cos(theta) - 2 theta sin(theta)| <= 4 + 2 theta turns the sum into
// three certified power tails:  S2 -+ (4 S0 / h^2 + 2 S1 / |h|).
Interval far_tail_bracket(const EnergyLaw& law, double two_s, long N, double h,
                          double tol) {
    const Interval s2 = power_weighted_tail(law, 2, two_s, N + 1, tol / 4.0);
    const Interval s1 = power_weighted_tail(law, 1, two_s, N + 1, tol / 4.0);
    const Interval s0 = power_weighted_tail(law, 0, two_s, N + 1, tol / 4.0);
    const double slack = 4.0 * s0.hi / (h * h) + 2.0 * s1.hi / std::abs(h);
    return Interval::of(std::max(0.0, s2.lo - slack), s2.hi + slack);
}

} // namespace

double weak_residual(const StateVector& f, long n, double t, double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw BadStep("difference step must be positive");
    if (!f.model().has_index(n))
        throw IndexError("mode " + std::to_string(n) + " is not in the spectrum");
    const std::complex<double> c0 = evolve(f, t).coefficient(n);
    const std::complex<double> cp = evolve(f, t + h).coefficient(n);
    const std::complex<double> cm = evolve(f, t - h).coefficient(n);
    const std::complex<double> i{0.0, 1.0};
    return std::abs(i * (cp - cm) / (2.0 * h) - f.model().energy(n) * c0);
}

NormResult quotient_residual(const StateVector& f, double t, double h, double tol) {
    if (h == 0.0 || !std::isfinite(h)) throw BadStep("difference step must be nonzero");
    if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
    if (!(tol > 0.0)) throw std::invalid_argument("bracket tolerance must be positive");

    // Phases drop out of |c_n(t)|, so t never enters the series.
    KahanSum head;
    for (const HeadMode& m : f.spec().head)
        head.add(std::norm(m.amplitude) * phi_of(f.model().energy(m.index) * h) /
                 (h * h));
    Interval total = Interval::point(head.value());

    if (f.spec().tail && f.spec().tail->amplitude > 0.0) {
        const PowerLawTail& tail = *f.spec().tail;
        const EnergyLaw law = f.model().law();
        if (power_tail_diverges(law, 2, tail.exponent))
            return NormResult::divergent(divergence_witness(law, 2, tail.exponent));

        const double a2 = tail.amplitude * tail.amplitude;
        const double two_s = 2.0 * tail.exponent;
        const double far_tol = tol / std::max(a2, 1.0) / 2.0;

        // Walk explicit terms outward until the bracketed remainder is
        // tight; the 1/h^2 slack factor shrinks like a power of where we
        // stop, so doubling reaches any tolerance quickly.
        KahanSum body;
        long done = tail.start - 1;
        long target = std::max(tail.start + 63, long(64));
        Interval far;
        while (true) {
            for (long n = done + 1; n <= target; ++n)
                body.add(std::pow(double(n), -two_s) * phi_of(law.at(n) * h) / (h * h));
            done = target;
            far = far_tail_bracket(law, two_s, done, h, far_tol);
            if (far.width() <= far_tol || target >= kMaxExplicitTailTerms) break;
            target *= 2;
        }
        total += (Interval::point(body.value()) + far).scaled(a2);
    }
    return NormResult::finite_value(total.clamped_nonnegative().sqrt());
}

std::vector<double> default_step_sequence() {
    std::vector<double> hs;
    for (int i = 0; i <= 6; ++i) hs.push_back(std::pow(10.0, -1.0 - 0.5 * i));
    return hs;
}

StrongVerdict strong_diff_verdict(const StateVector& f, double t,
                                  const std::vector<double>& h_sequence,
                                  double tol) {
    if (h_sequence.size() < 4)
        throw std::invalid_argument("step sequence needs at least 4 entries");
    for (std::size_t i = 0; i < h_sequence.size(); ++i) {
        if (!(h_sequence[i] > 0.0))
            throw std::invalid_argument("steps must be positive");
        if (i > 0 && !(h_sequence[i] < h_sequence[i - 1]))
            throw std::invalid_argument("step sequence must be strictly decreasing");
    }

    StrongVerdict out;
    bool any_divergent = false;
    for (double h : h_sequence) {
        out.residuals.emplace_back(h, quotient_residual(f, t, h, tol));
        any_divergent = any_divergent || !out.residuals.back().second.finite;
    }

    if (any_divergent) {
        out.outcome = StrongVerdict::Outcome::Diverges;
    } else {
        bool monotone = true;
        double log_h_mean = 0.0, log_r_mean = 0.0;
        std::vector<double> lh(out.residuals.size()), lr(out.residuals.size());
        for (std::size_t i = 0; i < out.residuals.size(); ++i) {
            const double r = std::max(out.residuals[i].second.value.mid(), 1e-300);
            if (i > 0 && r > out.residuals[i - 1].second.value.mid() * (1.0 + 1e-9))
                monotone = false;
            lh[i] = std::log(out.residuals[i].first);
            lr[i] = std::log(r);
            log_h_mean += lh[i];
            log_r_mean += lr[i];
        }
        log_h_mean /= double(lh.size());
        log_r_mean /= double(lr.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < lh.size(); ++i) {
            num += (lh[i] - log_h_mean) * (lr[i] - log_r_mean);
            den += (lh[i] - log_h_mean) * (lh[i] - log_h_mean);
        }
        const double slope = num / den;
        out.slope = slope;
        if (monotone && slope > 0.01)
            out.outcome = StrongVerdict::Outcome::Converges;
        else if (slope <= -0.5)
            out.outcome = StrongVerdict::Outcome::Diverges;
        else
            out.outcome = StrongVerdict::Outcome::Inconclusive;
    }

    // The verdict restates domain membership, so it must not contradict the
    // certified classification.
    const int k_star = classify(f, tol).k_star;
    if (out.outcome == StrongVerdict::Outcome::Converges && k_star != 2)
        throw std::logic_error("convergent quotient residuals outside the operator domain");
    if (out.outcome == StrongVerdict::Outcome::Diverges && k_star == 2)
        throw std::logic_error("divergent quotient residuals inside the operator domain");
    return out;
}

BoxCountResult box_count_dimension(const WaveSamples& samples,
                                   std::vector<double> scales) {
    if (samples.grid.size() < 2)
        throw std::invalid_argument("box counting needs at least 2 samples");
    if (scales.size() < 3) throw std::invalid_argument("box counting needs >= 3 scales");
    for (double s : scales)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("scales must be positive");
    std::sort(scales.begin(), scales.end(), std::greater<>());
    if (scales.front() < 100.0 * scales.back())
        throw std::invalid_argument("scales must span at least two decades");

    const double x0 = samples.grid.front();
    const double span = samples.grid.back() - x0;
    const double per_box = double(samples.grid.size()) * scales.back() / span;
    if (per_box < 4.0)
        throw ResolutionError("fewer than 4 samples per smallest box");

    BoxCountResult out;
    std::vector<double> lx, ly;
    for (double eps : scales) {
        // Occupied boxes of the graph: per x-column, the straddled y-bins.
        std::map<long, std::pair<double, double>> columns;
        for (std::size_t i = 0; i < samples.grid.size(); ++i) {
            const long col = long((samples.grid[i] - x0) / eps);
            const double y = samples.values[i].real();
            auto [it, inserted] = columns.try_emplace(col, std::pair{y, y});
            if (!inserted) {
                it->second.first = std::min(it->second.first, y);
                it->second.second = std::max(it->second.second, y);
            }
        }
        long boxes = 0;
        for (const auto& [col, range] : columns) {
            (void)col;
            boxes += long(std::floor(range.second / eps)) -
                     long(std::floor(range.first / eps)) + 1;
        }
        out.counts.emplace_back(eps, boxes);
        lx.push_back(std::log(1.0 / eps));
        ly.push_back(std::log(double(boxes)));
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(ly.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    out.dimension = num / den;
    double rss = 0.0;
    const double intercept = my - out.dimension * mx;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + out.dimension * lx[i]);
        rss += r * r;
    }
    out.fit_residual = std::sqrt(rss / double(lx.size()));
    return out;
}

} // namespace schrscale
