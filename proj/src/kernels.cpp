#include "schrscale/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "schrscale/errors.hpp"
#include "schrscale/parallel.hpp"

namespace schrscale::kernels {

namespace {

// The batch drivers validate everything up front, so by the time a parallel
// body re-runs these checks per point they can no longer throw.
void check_positions(const SpectrumModel& model, const std::vector<double>& xs) {
    if (model.kind() != SpectrumKind::Box) return;
    for (double x : xs)
        if (x < 0.0 || x > model.length())
            throw DomainError("box eigenfunctions live on [0, L]");
}

void check_terms(const SpectrumModel& model, const ModeTerms& terms) {
    if (!model.has_eigenfunctions())
        throw UnsupportedOperation("table spectra carry no eigenfunctions");
    long prev = 0;
    bool first = true;
    for (const auto& [n, c] : terms) {
        if (!model.has_index(n))
            throw IndexError("expansion mode " + std::to_string(n) +
                             " is not in the spectrum");
        if (!first && n <= prev)
            throw std::invalid_argument("expansion modes must be strictly ascending");
        prev = n;
        first = false;
        (void)c;
    }
}

// Dense box evaluation: rotate (sin, cos) of n*theta upward from n = 1 and
// consume coefficients as their indices come by.
WavePoint box_dense(const SpectrumModel& model, const ModeTerms& terms, double x,
                    bool want_derivative) {
    const double length = model.length();
    const double theta = std::numbers::pi * x / length;
    const double st = std::sin(theta), ct = std::cos(theta);
    const double scale = std::sqrt(2.0 / length);
    const double dscale = std::numbers::pi / length;

    WavePoint out;
    double s = 0.0, c = 1.0;  // sin(n theta), cos(n theta) at n = 0
    long n = 0;
    for (const auto& [index, coeff] : terms) {
        while (n < index) {
            const double s_next = s * ct + c * st;
            c = c * ct - s * st;
            s = s_next;
            ++n;
        }
        out.value += coeff * (scale * s);
        if (want_derivative) out.derivative += coeff * (scale * dscale * double(n) * c);
    }
    return out;
}

WavePoint box_sparse(const SpectrumModel& model, const ModeTerms& terms, double x,
                     bool want_derivative) {
    const double length = model.length();
    const double scale = std::sqrt(2.0 / length);
    const double dscale = std::numbers::pi / length;
    WavePoint out;
    for (const auto& [index, coeff] : terms) {
        const double arg = double(index) * std::numbers::pi * x / length;
        out.value += coeff * (scale * std::sin(arg));
        if (want_derivative)
            out.derivative += coeff * (scale * dscale * double(index) * std::cos(arg));
    }
    return out;
}

WavePoint box_point(const SpectrumModel& model, const ModeTerms& terms, double x,
                    bool want_derivative) {
    if (x < 0.0 || x > model.length())
        throw DomainError("box eigenfunctions live on [0, L]");
    // The rotation walk costs O(n_max) regardless of how many modes are
    // listed; direct sincos wins when the expansion is sparse on its span.
    const long span = terms.back().first;
    if (long(terms.size()) * 4 < span) return box_sparse(model, terms, x, want_derivative);
    return box_dense(model, terms, x, want_derivative);
}

WavePoint oscillator_point(const ModeTerms& terms, double x, bool want_derivative) {
    const long top = terms.back().first;
    WavePoint out;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    std::size_t at = 0;
    for (long k = 0; k <= top; ++k) {
        const double next = x * std::sqrt(2.0 / double(k + 1)) * cur -
                            std::sqrt(double(k) / double(k + 1)) * prev;
        if (terms[at].first == k) {
            const auto& coeff = terms[at].second;
            out.value += coeff * cur;
            if (want_derivative)
                out.derivative += coeff * (std::sqrt(double(k) / 2.0) * prev -
                                           std::sqrt(double(k + 1) / 2.0) * next);
            ++at;
        }
        prev = cur;
        cur = next;
    }
    return out;
}

WavePoint eval_point(const SpectrumModel& model, const ModeTerms& terms, double x,
                     bool want_derivative) {
    check_terms(model, terms);
    if (terms.empty()) return {};
    if (model.kind() == SpectrumKind::Box)
        return box_point(model, terms, x, want_derivative);
    return oscillator_point(terms, x, want_derivative);
}

} // namespace

std::complex<double> synth_point_value(const SpectrumModel& model,
                                       const ModeTerms& terms, double x) {
    return eval_point(model, terms, x, false).value;
}

WavePoint synth_point(const SpectrumModel& model, const ModeTerms& terms, double x) {
    return eval_point(model, terms, x, true);
}

std::vector<std::complex<double>> synth_values(const SpectrumModel& model,
                                               const ModeTerms& terms,
                                               const std::vector<double>& xs) {
    check_terms(model, terms);
    check_positions(model, xs);
    std::vector<std::complex<double>> out(xs.size());
    parallel_for(long(xs.size()), [&](long i) {
        out[std::size_t(i)] = eval_point(model, terms, xs[std::size_t(i)], false).value;
    });
    return out;
}

std::vector<WavePoint> synth_with_derivative(const SpectrumModel& model,
                                             const ModeTerms& terms,
                                             const std::vector<double>& xs) {
    check_terms(model, terms);
    check_positions(model, xs);
    std::vector<WavePoint> out(xs.size());
    parallel_for(long(xs.size()), [&](long i) {
        out[std::size_t(i)] = eval_point(model, terms, xs[std::size_t(i)], true);
    });
    return out;
}

} // namespace schrscale::kernels
