#include "schrscale/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "schrscale/errors.hpp"

namespace schrscale {

StateVector evolve(const StateVector& f, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
    if (t == 0.0) return f;
    CoefficientSpec spec = f.spec();
    for (HeadMode& h : spec.head)
        h.amplitude *= std::polar(1.0, -f.model().energy(h.index) * t);
    return StateVector(std::move(spec), f.model(), StateVector::kNormTol,
                       f.tail_time() + t);
}

double WaveSamples::truncation_bound() const { return std::sqrt(truncated_mass.hi); }

WaveSamples synthesize(const StateVector& f, double t, std::vector<double> grid,
                       long n_max) {
    if (!f.model().has_eigenfunctions())
        throw UnsupportedOperation("table spectra cannot be synthesized on a grid");
    if (n_max < f.max_head_index())
        throw std::invalid_argument("truncation index must cover the explicit head");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i]))
            throw std::invalid_argument("sample grid must be strictly increasing");

    const StateVector at_time = evolve(f, t);
    WaveSamples out;
    out.values = kernels::synth_values(f.model(), at_time.coefficients_upto(n_max), grid);
    out.grid = std::move(grid);
    out.time = t;
    out.truncation_index = n_max;
    out.truncated_mass = at_time.truncated_mass(n_max);
    return out;
}

MultiplierSpec MultiplierSpec::zero() { return {}; }

MultiplierSpec MultiplierSpec::sine(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("sine multiplier amplitude must be nonnegative");
    MultiplierSpec u;
    u.kind_ = MultiplierKind::Sine;
    u.alpha_ = alpha;
    return u;
}

MultiplierSpec MultiplierSpec::clamp(double cap) {
    if (!std::isfinite(cap)) throw std::invalid_argument("clamp cap must be finite");
    MultiplierSpec u;
    u.kind_ = MultiplierKind::Clamp;
    u.cap_ = cap;
    return u;
}

MultiplierSpec MultiplierSpec::table(std::vector<std::pair<Interval, double>> pieces) {
    if (pieces.empty())
        throw std::invalid_argument("table multiplier needs at least one piece");
    for (const auto& [range, value] : pieces) {
        (void)range;
        if (!std::isfinite(value))
            throw std::invalid_argument("table multiplier values must be finite");
    }
    MultiplierSpec u;
    u.kind_ = MultiplierKind::Table;
    u.pieces_ = std::move(pieces);
    return u;
}

double MultiplierSpec::value(double lambda) const {
    switch (kind_) {
        case MultiplierKind::Zero: return lambda;
        case MultiplierKind::Sine: return lambda - alpha_ * std::sin(lambda);
        case MultiplierKind::Clamp: return std::min(lambda, cap_);
        case MultiplierKind::Table:
            for (const auto& [range, v] : pieces_)
                if (range.contains(lambda)) return v;
            throw NotInExtensionFamily("multiplier table does not cover eigenvalue " +
                                       std::to_string(lambda));
    }
    return lambda;
}

double MultiplierSpec::bound_over(const StateVector& f) const {
    switch (kind_) {
        case MultiplierKind::Zero: return 0.0;
        case MultiplierKind::Sine: return alpha_ * alpha_;
        case MultiplierKind::Clamp:
        case MultiplierKind::Table: break;
    }
    if (!f.finite_support())
        throw NotInExtensionFamily(
            "deviation is unbounded over an infinite expansion; window the state first");
    double sup = 0.0;
    for (const HeadMode& h : f.spec().head) {
        const double d = deviation(f.model().energy(h.index));
        sup = std::max(sup, d * d);
    }
    return sup;
}

std::complex<double> ExtensionResult::coefficient(long n) const {
    const std::complex<double> c = source_.coefficient(n);
    if (c == std::complex<double>{}) return {};
    const double lambda = source_.model().energy(n);
    const double u = multiplier_.value(lambda);
    return (lambda - u) * std::polar(1.0, -u * time_) * c;
}

ExtensionResult apply_extension(const StateVector& f, const MultiplierSpec& u,
                                double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
    const bool tail_active = f.spec().tail && f.spec().tail->amplitude > 0.0;
    if (tail_active && (u.kind() == MultiplierKind::Clamp || u.kind() == MultiplierKind::Table))
        throw NotInExtensionFamily(
            "deviation is unbounded over an infinite expansion; window the state first");

    ExtensionResult out(f, u, t);
    out.bound_ = u.bound_over(f);

    KahanSum head_mass;
    for (const HeadMode& h : f.spec().head) {
        const double lambda = f.model().energy(h.index);
        const double dev = u.deviation(lambda);
        const std::complex<double> image =
            dev == 0.0 ? std::complex<double>{}
                       : dev * std::polar(1.0, -u.value(lambda) * t) * h.amplitude;
        out.head_terms_.emplace_back(h.index, image);
        head_mass.add(std::norm(image));
    }
    out.squared_mass_ = Interval::point(head_mass.value());

    if (tail_active && u.kind() == MultiplierKind::Sine && u.sine_amplitude() > 0.0) {
        // |dev|^2 = alpha^2 sin^2(E_n) swings through the whole [0, alpha^2]
        // range along the tail, so only the one-sided bound is certified.
        const Interval tail_mass =
            f.truncated_mass(f.spec().tail->start - 1).clamped_nonnegative();
        out.squared_mass_ = Interval::of(
            out.squared_mass_.lo, out.squared_mass_.hi + out.bound_ * tail_mass.hi);
    }
    return out;
}

BoundCheck extension_bound_check(const StateVector& f, const MultiplierSpec& u,
                                 double t) {
    const ExtensionResult image = apply_extension(f, u, t);
    // Rebuild the state's mass from the same pieces the image mass used
    // (head sum plus the identical tail bracket call), so the two sides of
    // the inequality share every tail bound instead of comparing brackets
    // computed at different tolerances.
    KahanSum mass;
    for (const HeadMode& h : f.spec().head) mass.add(std::norm(h.amplitude));
    double total = mass.value();
    if (f.spec().tail && f.spec().tail->amplitude > 0.0)
        total += f.truncated_mass(f.spec().tail->start - 1).clamped_nonnegative().hi;
    return {image.squared_mass().hi, image.bound() * total};
}

} // namespace schrscale
