#pragma once

#include <cstdint>
#include <vector>

#include "schrscale/state.hpp"

namespace schrscale {

// Density threshold below which a point counts as a node.  Velocity fields
// blow up like 1/rho there, so evaluation refuses to continue.
inline constexpr double kNodeEpsilon = 1e-10;

// Current velocity 2 Im(psi'/psi) at (x, t), in units hbar = 1, 2m = 1.
// The derivative comes from the exact eigenfunction-derivative sum, never
// from finite differences.  Requires a finite expansion: window infinite
// states first.  Throws NodeProximity when the density at x is within the
// node guard, DomainRequired for states with an active tail.
double velocity(const StateVector& state, double t, double x);

// Sample paths of one ensemble, recorded at a thinned set of snapshot
// times (always including 0 and the final time).  Positions are stored
// path-major: position(p, k) is path p at times[k].  A path that reaches
// the node guard (or a non-finite drift) is frozen at its last good
// position and flagged; the run continues for the others.
struct TrajectoryEnsemble {
    enum class Kind { Bohmian, Nelson };

    Kind kind = Kind::Bohmian;
    std::vector<double> times;
    long path_count = 0;
    std::vector<double> positions;
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::vector<unsigned char> breached;
    long breach_count = 0;
    bool ordering_ok = true;

    double position(long path, std::size_t slot) const {
        return positions[std::size_t(path) * times.size() + slot];
    }
};

// Deterministic paths dx/dt = v(x, t), one per starting point, integrated
// with classic 4-stage steps over [0, t_span].  Near nodes (density below
// 10x the guard) a step is refined tenfold; hitting the guard itself
// freezes the path.  One-dimensional flow lines cannot cross, so the
// ensemble records whether the initial ordering survived at every
// snapshot (frozen paths excluded).
TrajectoryEnsemble integrate_bohmian(const StateVector& state,
                                     const std::vector<double>& x0s,
                                     double t_span, double dt);

// Diffusion sample paths x <- x + b dt + sqrt(2 dt) xi with forward drift
// b = v + u_osm, osmotic velocity u_osm = rho'/rho, and unit diffusion
// coefficient.  Starting points are drawn from |psi(., 0)|^2 by inverse
// CDF; each path owns a generator stream derived from (seed, path), so
// results are bit-identical for any worker count.  Box walls reflect.
TrajectoryEnsemble sample_nelson(const StateVector& state, long paths,
                                 double t_span, double dt, std::uint64_t seed);

// The inverse-CDF draw used for Nelson starting points, exposed so
// deterministic ensembles can be built for other integrators.  Path p's
// position comes from the first uniform draw of stream (seed, p).
std::vector<double> sample_initial_positions(const StateVector& state,
                                             long paths, std::uint64_t seed);

// Kolmogorov-Smirnov distance between the ensemble's empirical distribution
// at snapshot time t and the density |psi(., t)|^2 integrated by quadrature.
// Small values certify that the transported ensemble still samples the
// quantum density.  t must match one of the recorded snapshot times to
// within half a step.
double equivariance_statistic(const TrajectoryEnsemble& ensemble,
                              const StateVector& state, double t);

} // namespace schrscale
