#pragma once

#include <utility>
#include <vector>

#include "schrscale/series.hpp"

namespace schrscale {

enum class SpectrumKind { Box, Oscillator, Table };

// Uniform sample grid, endpoints included; doubles as a trapezoid quadrature
// rule for overlap integrals and density profiles.
struct UniformGrid {
    double lo = 0.0;
    double hi = 1.0;
    long points = 2;

    double spacing() const { return (hi - lo) / double(points - 1); }
    double at(long i) const { return lo + spacing() * double(i); }
};

// Discrete spectrum of a self-adjoint Hamiltonian with simple eigenvalues,
// in units hbar = 1, 2m = 1:
//
//   Box(length L):  E_n = (n pi / L)^2 + shift, n >= 1,
//                   phi_n(x) = sqrt(2/L) sin(n pi x / L) on [0, L]
//   Oscillator:     E_n = (n + 1/2) + shift, n >= 0, Hermite functions on R
//   Table:          explicit (n, E_n) list, no eigenfunctions
//
// Construction enforces min_n E_n >= 1 by raising the shift when needed; the
// requested and applied shifts are both kept so outputs can echo the
// adjustment.
class SpectrumModel {
public:
    static constexpr double kDefaultBoxLength = 3.14159265358979323846;

    static SpectrumModel box(double length = kDefaultBoxLength, double shift = 0.0);
    static SpectrumModel oscillator(double shift = 0.5);
    static SpectrumModel table(std::vector<std::pair<long, double>> levels,
                               double shift = 0.0);

    SpectrumKind kind() const { return kind_; }
    double length() const;
    double shift_requested() const { return shift_requested_; }
    double shift_applied() const { return shift_applied_; }
    long min_index() const;
    bool has_eigenfunctions() const { return kind_ != SpectrumKind::Table; }
    bool has_index(long n) const;

    double energy(long n) const;
    double eigenfunction(long n, double x) const;
    double eigenfunction_derivative(long n, double x) const;

    // Growth law E_n = scale * n^degree + shift for the tail machinery;
    // undefined for table spectra.
    EnergyLaw law() const;

    const std::vector<std::pair<long, double>>& levels() const { return levels_; }

private:
    SpectrumModel() = default;

    SpectrumKind kind_ = SpectrumKind::Box;
    double length_ = kDefaultBoxLength;
    double shift_requested_ = 0.0;
    double shift_applied_ = 0.0;
    std::vector<std::pair<long, double>> levels_; // table only, pre-shift values
};

// |<phi_n, phi_m> - delta_nm| under the grid's trapezoid rule; the residue of
// discretized orthonormality, not of the functions themselves.
double orthonormality_defect(const SpectrumModel& model, long n, long m,
                             const UniformGrid& grid);

} // namespace schrscale
