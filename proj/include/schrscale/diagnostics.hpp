#pragma once

#include <optional>
#include <vector>

#include "schrscale/evolution.hpp"
#include "schrscale/state.hpp"

namespace schrscale {

// ── Weak versus strong time evolution ──────────────────────────────────────
//
// Per mode, the phase ODE  i d/dt <n|psi,t> = E_n <n|psi,t>  holds for every
// state; weak_residual measures it by central differences and decays like
// E_n^3 h^2 / 6 regardless of whether H psi exists.
//
// The strong statement compares the difference quotient against H psi in
// the full norm.  Parseval turns that residual into the exact series
//
//     | [psi(t+h) - psi(t)] / h + i H psi(t) |^2
//         = sum_n |c_n|^2 phi(E_n h) / h^2,
//     phi(theta) = theta^2 + 2 - 2 cos(theta) - 2 theta sin(theta),
//
// whose convergence at fixed h is equivalent to membership in H_2, because
// phi(theta) grows like theta^2.  That makes the weak/strong gap decidable:
// the per-mode residuals vanish while the norm residual diverges exactly
// for states outside the operator domain.

// |i [c_n(t+h) - c_n(t-h)] / 2h - E_n c_n(t)|, built on evolve.
double weak_residual(const StateVector& f, long n, double t, double h);

// Bracket on the norm residual above (the norm itself, not its square).
// Divergent exactly when the state's tail sits outside H_2; the witness is
// the tail's k = 2 term exponent.  The value is independent of t.
NormResult quotient_residual(const StateVector& f, double t, double h,
                             double tol = StateVector::kNormTol);

struct StrongVerdict {
    enum class Outcome { Converges, Diverges, Inconclusive };

    Outcome outcome = Outcome::Inconclusive;
    // Log-log slope of residual against h; absent when divergence
    // certificates preclude a fit.
    std::optional<double> slope;
    std::vector<std::pair<double, NormResult>> residuals;
};

// Decides strong differentiability from quotient residuals along a
// decreasing step sequence (>= 4 entries).  Any divergence certificate
// settles the matter; otherwise the residuals must shrink monotonically
// with a clearly positive slope to count as convergent.  The outcome is
// cross-checked against classify and a contradiction throws logic_error.
// tol is the bracket tolerance handed to every residual; tail exponents
// just above 5/2 put the certified walk near its term cap at the default,
// so callers probing that edge should loosen it.
StrongVerdict strong_diff_verdict(const StateVector& f, double t,
                                  const std::vector<double>& h_sequence,
                                  double tol = StateVector::kNormTol);

// Log-spaced default for strong_diff_verdict, 1e-1 down to 1e-4.
std::vector<double> default_step_sequence();

// ── Box-counting estimator ──────────────────────────────────────────────────

struct BoxCountResult {
    double dimension = 0.0;
    double fit_residual = 0.0;
    std::vector<std::pair<double, long>> counts;  // (scale, box count)
};

// Box-counting estimate of the graph dimension of x -> Re psi(x): least
// squares slope of log N(eps) against log(1/eps).  Needs >= 3 scales
// spanning two decades and at least 4 samples per smallest box on average.
BoxCountResult box_count_dimension(const WaveSamples& samples,
                                   std::vector<double> scales);

} // namespace schrscale
