#pragma once

#include "schrscale/interval.hpp"

namespace schrscale {

// ── Certified tail sums for power series ───────────────────────────────────
//
// Everything in the norm algebra reduces to sums of the shape
//
//     S = sum_{n > N}  n^(-q) * E_n^k,      E_n = scale * n^degree + shift,
//
// with integer k in [-2, 2], real q > 0, scale > 0, shift >= 0 and
// degree in {1, 2}.  The driver below returns a two-sided bracket [lo, hi]
// that provably contains S whenever the series converges, i.e. whenever
// q - degree*k > 1.
//
// The primitive is the pure p-series tail  T(p, N) = sum_{n > N} n^(-p).
// For the decreasing term function f(x) = x^(-p) the classic integral test
// sandwiches it:
//
//     integral_{N+1}^inf f  <=  T(p, N)  <=  integral_N^inf f,
//
// both ends in closed form, so the bracket is certified and its width
// (roughly one term, N^(-p)) is driven below any tolerance by pushing N out.
//
// The weighted sums are lowered onto T:
//   k >= 0:  E_n^k expands binomially into scale^j * shift^(k-j) * n^(degree*j),
//            each piece a pure p-series tail.
//   k <  0:  with m = -k,  E_n^(-m) = (scale * n^degree)^(-m) * (1+u_n)^(-m),
//            u_n = shift / (scale * n^degree) decreasing, and Bernoulli's
//            inequality pins (1+u)^(-m) inside [1 - m*u_{N+1}, 1].

// Eigenvalue growth law E_n = scale * n^degree + shift, degree in {1, 2}.
struct EnergyLaw {
    double scale = 1.0;
    int degree = 2;
    double shift = 0.0;

    double at(long n) const;
};

double ipow(double base, int exponent);

// Bracket for sum_{n > N} n^(-p); requires p > 1 and N >= 1.
Interval pseries_tail(double p, long N);

// Bracket for sum_{n > N} n^(-q) * E_n^k; requires q - degree*k > 1.
Interval power_tail_bracket(const EnergyLaw& law, int k, double q, long N);

// Bracket for the full weighted tail sum_{n >= n_begin} n^(-q) * E_n^k,
// adaptively splitting into an exact compensated head sum plus a bracketed
// remainder until the bracket width drops below abs_tol.
Interval power_weighted_tail(const EnergyLaw& law, int k, double q, long n_begin,
                             double abs_tol);

// q = 2s; the weighted series sum n^(-2s) E_n^k diverges iff the term
// exponent degree*k - 2s is >= -1.  Returns that exponent (the witness).
double divergence_witness(const EnergyLaw& law, int k, double s);
bool power_tail_diverges(const EnergyLaw& law, int k, double s);

} // namespace schrscale
