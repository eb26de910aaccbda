#include "schrscale/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "schrscale/errors.hpp"
#include "schrscale/interval.hpp"

namespace schrscale {

namespace {

double raised_shift(double requested, double unshifted_minimum) {
    const double min_with_requested = unshifted_minimum + requested;
    return min_with_requested >= 1.0 ? requested : requested + (1.0 - min_with_requested);
}

} // namespace

SpectrumModel SpectrumModel::box(double length, double shift) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("box length must be positive and finite");
    if (!std::isfinite(shift) || shift < 0.0)
        throw std::invalid_argument("spectral shift must be finite and nonnegative");
    SpectrumModel m;
    m.kind_ = SpectrumKind::Box;
    m.length_ = length;
    m.shift_requested_ = shift;
    const double ground = std::pow(std::numbers::pi / length, 2.0);
    m.shift_applied_ = raised_shift(shift, ground);
    return m;
}

SpectrumModel SpectrumModel::oscillator(double shift) {
    if (!std::isfinite(shift) || shift < 0.0)
        throw std::invalid_argument("spectral shift must be finite and nonnegative");
    SpectrumModel m;
    m.kind_ = SpectrumKind::Oscillator;
    m.shift_requested_ = shift;
    m.shift_applied_ = raised_shift(shift, 0.5);
    return m;
}

SpectrumModel SpectrumModel::table(std::vector<std::pair<long, double>> levels,
                                   double shift) {
    if (levels.empty()) throw std::invalid_argument("table spectrum needs at least one level");
    if (!std::isfinite(shift) || shift < 0.0)
        throw std::invalid_argument("spectral shift must be finite and nonnegative");
    double min_energy = levels.front().second;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i].second))
            throw std::invalid_argument("table energies must be finite");
        if (i > 0) {
            if (levels[i].first <= levels[i - 1].first)
                throw std::invalid_argument("table mode indices must be strictly increasing");
            if (levels[i].second <= levels[i - 1].second)
                throw std::invalid_argument("table energies must be strictly increasing");
        }
        min_energy = std::min(min_energy, levels[i].second);
    }
    SpectrumModel m;
    m.kind_ = SpectrumKind::Table;
    m.shift_requested_ = shift;
    m.shift_applied_ = raised_shift(shift, min_energy);
    m.levels_ = std::move(levels);
    return m;
}

double SpectrumModel::length() const {
    if (kind_ != SpectrumKind::Box)
        throw UnsupportedOperation("length is defined for box spectra only");
    return length_;
}

long SpectrumModel::min_index() const {
    switch (kind_) {
        case SpectrumKind::Box: return 1;
        case SpectrumKind::Oscillator: return 0;
        case SpectrumKind::Table: return levels_.front().first;
    }
    return 1;
}

bool SpectrumModel::has_index(long n) const {
    switch (kind_) {
        case SpectrumKind::Box: return n >= 1;
        case SpectrumKind::Oscillator: return n >= 0;
        case SpectrumKind::Table:
            return std::binary_search(
                levels_.begin(), levels_.end(), std::make_pair(n, 0.0),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return false;
}

double SpectrumModel::energy(long n) const {
    if (!has_index(n))
        throw IndexError("mode " + std::to_string(n) + " is not in the spectrum");
    switch (kind_) {
        case SpectrumKind::Box: {
            // pi / L first: for the default L = pi this is exactly 1, so the
            // eigenvalues are exact integers and integer-spectrum revivals
            // cost no representation error.
            const double wavenumber = double(n) * (std::numbers::pi / length_);
            return wavenumber * wavenumber + shift_applied_;
        }
        case SpectrumKind::Oscillator:
            return double(n) + 0.5 + shift_applied_;
        case SpectrumKind::Table: {
            const auto it = std::lower_bound(
                levels_.begin(), levels_.end(), std::make_pair(n, 0.0),
                [](const auto& a, const auto& b) { return a.first < b.first; });
            return it->second + shift_applied_;
        }
    }
    return 0.0;
}

double SpectrumModel::eigenfunction(long n, double x) const {
    if (!has_eigenfunctions())
        throw UnsupportedOperation("table spectra carry no eigenfunctions");
    if (!has_index(n))
        throw IndexError("mode " + std::to_string(n) + " is not in the spectrum");
    if (kind_ == SpectrumKind::Box) {
        if (x < 0.0 || x > length_)
            throw DomainError("box eigenfunctions live on [0, L]");
        return std::sqrt(2.0 / length_) * std::sin(double(n) * std::numbers::pi * x / length_);
    }
    // Normalized Hermite functions by the stable two-term recurrence
    //   h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1},
    //   h_0 = pi^(-1/4) exp(-x^2/2).
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (long k = 0; k < n; ++k) {
        const double next = x * std::sqrt(2.0 / double(k + 1)) * cur -
                            std::sqrt(double(k) / double(k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double SpectrumModel::eigenfunction_derivative(long n, double x) const {
    if (!has_eigenfunctions())
        throw UnsupportedOperation("table spectra carry no eigenfunctions");
    if (!has_index(n))
        throw IndexError("mode " + std::to_string(n) + " is not in the spectrum");
    if (kind_ == SpectrumKind::Box) {
        if (x < 0.0 || x > length_)
            throw DomainError("box eigenfunctions live on [0, L]");
        const double wavenumber = double(n) * std::numbers::pi / length_;
        return std::sqrt(2.0 / length_) * wavenumber *
               std::cos(double(n) * std::numbers::pi * x / length_);
    }
    // d/dx h_n = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}
    const double below = n > 0 ? eigenfunction(n - 1, x) : 0.0;
    const double above = eigenfunction(n + 1, x);
    return std::sqrt(double(n) / 2.0) * below - std::sqrt(double(n + 1) / 2.0) * above;
}

EnergyLaw SpectrumModel::law() const {
    switch (kind_) {
        case SpectrumKind::Box: {
            const double c = std::pow(std::numbers::pi / length_, 2.0);
            return EnergyLaw{c, 2, shift_applied_};
        }
        case SpectrumKind::Oscillator:
            return EnergyLaw{1.0, 1, 0.5 + shift_applied_};
        case SpectrumKind::Table:
            throw UnsupportedOperation("table spectra have no growth law");
    }
    return {};
}

double orthonormality_defect(const SpectrumModel& model, long n, long m,
                             const UniformGrid& grid) {
    if (grid.points < 2) throw std::invalid_argument("quadrature grid needs >= 2 points");
    KahanSum acc;
    for (long i = 0; i < grid.points; ++i) {
        const double x = grid.at(i);
        const double w = (i == 0 || i == grid.points - 1) ? 0.5 : 1.0;
        acc.add(w * model.eigenfunction(n, x) * model.eigenfunction(m, x));
    }
    const double integral = acc.value() * grid.spacing();
    return std::abs(integral - (n == m ? 1.0 : 0.0));
}

} // namespace schrscale
