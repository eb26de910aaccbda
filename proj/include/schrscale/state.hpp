#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schrscale/interval.hpp"
#include "schrscale/series.hpp"
#include "schrscale/spectrum.hpp"

namespace schrscale {

// ── Coefficient sequences and the Hilbert scale ────────────────────────────
//
// A state is a coefficient sequence over the model's eigenbasis: a finite
// explicit head plus an optional closed-form power-law tail
//
//     c_n = A * n^(-s) * phase(n)   for n >= n0.
//
// Keeping the tail in closed form is what lets every norm question be
// decided exactly: the squared scale norm
//
//     |f|_k^2 = sum_n E_n^k |c_n|^2,   k in {-2, -1, 0, 1, 2},
//
// reduces on the tail to a weighted p-series, so convergence follows from
// the term exponent alone and finite values come with certified brackets.

enum class PhaseRule { Zero, Alternating };

double phase_factor(PhaseRule rule, long n);

struct HeadMode {
    long index = 0;
    std::complex<double> amplitude;
};

struct PowerLawTail {
    double exponent = 1.0;   // s
    long start = 1;          // first covered index n0
    double amplitude = 1.0;  // A
    PhaseRule phase = PhaseRule::Zero;
};

struct CoefficientSpec {
    std::vector<HeadMode> head;
    std::optional<PowerLawTail> tail;
};

// Squared-norm outcome: a certified bracket, or a divergence certificate
// carrying the p-series term exponent that failed the convergence test.
struct NormResult {
    bool finite = true;
    Interval value;
    double witness = 0.0;

    static NormResult finite_value(Interval v) { return {true, v, 0.0}; }
    static NormResult divergent(double w) { return {false, {}, w}; }
};

// Coefficient sequence bound to a spectrum model, carrying a certified
// bracket on its total squared mass sum |c_n|^2.  Construction validates the
// spec (ordered distinct head indices below the tail, tails only on models
// with a growth law) and always computes the certificate; it does not
// rescale, so windowed or operator-image states may carry any finite mass.
class StateVector {
public:
    static constexpr double kNormTol = 1e-10;

    StateVector(CoefficientSpec spec, SpectrumModel model, double tol = kNormTol,
                double tail_time = 0.0);

    const CoefficientSpec& spec() const { return spec_; }
    const SpectrumModel& model() const { return model_; }
    const Interval& norm_certificate() const { return certificate_; }

    bool finite_support() const { return !spec_.tail.has_value(); }
    bool is_zero() const { return certificate_.hi == 0.0; }

    // Phase time carried symbolically by the tail: tail coefficients read
    // A n^(-s) phase(n) exp(-i E_n tail_time).  Head amplitudes always store
    // their phases explicitly, so this is 0 for finite-support states.
    double tail_time() const { return tail_time_; }

    // Coefficient at mode n with all phases applied; 0 off the support.
    std::complex<double> coefficient(long n) const;

    // Explicit (index, coefficient) pairs for every supported mode with
    // index <= n_max, ascending, tail modes materialized with their phases.
    std::vector<std::pair<long, std::complex<double>>> coefficients_upto(long n_max) const;

    // Bracket on the squared mass dropped by truncating at n_max: head modes
    // above n_max exactly, tail remainder by certified p-series bounds.
    Interval truncated_mass(long n_max, double tol = kNormTol) const;

    long max_head_index() const;

private:
    CoefficientSpec spec_;
    SpectrumModel model_;
    Interval certificate_;
    double tail_time_ = 0.0;
};

// Rescales the spec to unit mass.  The returned certificate brackets the
// actual squared mass of the stored amplitudes and has width <= tol.
// Throws EmptyState for zero mass, NotNormalizable for divergent tails.
StateVector normalize(const CoefficientSpec& spec, const SpectrumModel& model,
                      double tol = StateVector::kNormTol);

// Squared scale norm sum E_n^k |c_n|^2 for k in {-2 .. 2}.
NormResult scale_norm(const StateVector& f, int k, double tol = StateVector::kNormTol);

// Membership along the scale H_2 c H_1 c H_0: k_star is the largest k in
// {2, 1, 0} whose squared norm is finite (0 always qualifies for states
// with a mass certificate).  All five norms come along for reporting.
struct Classification {
    int k_star = 0;
    std::array<NormResult, 5> norms;  // index k + 2 holds the H_k result

    const NormResult& at(int k) const { return norms[std::size_t(k + 2)]; }
    bool in_operator_domain() const { return k_star == 2; }
    bool finite_mean_energy() const { return k_star >= 1; }
};

Classification classify(const StateVector& f, double tol = StateVector::kNormTol);

// Mean energy sum E_n |c_n|^2 of a unit-mass state; Divergent exactly when
// the state sits below H_1.  On H_1 states outside the k=2 level the value
// is the quadratic-form mean taken through E_n^(1/2) weights.
NormResult mean_energy(const StateVector& f, double tol = StateVector::kNormTol);

// Harmonic counterpart sum E_n^(-1) |c_n|^2; always finite since E_n >= 1.
NormResult inverse_energy_mean(const StateVector& f, double tol = StateVector::kNormTol);

// Keeps exactly the coefficients with a < E_n <= b (half-open, matching a
// right-continuous spectral family).  The result has finite support and is
// generally not unit mass; its certificate reports the retained mass.
StateVector spectral_window(const StateVector& f, double a, double b);

// Squared mass of the part removed by spectral_window(f, a, b).
NormResult window_complement_mass(const StateVector& f, double a, double b,
                                  double tol = StateVector::kNormTol);

// Coefficientwise image under the Hamiltonian: c_n -> E_n c_n.  Defined for
// finite-support states only; window first to land in one.
StateVector apply_hamiltonian(const StateVector& f);

// State specification grammar, round-trippable through format_state_spec:
//   "modes:1=0.70710678,2=0.70710678"       explicit head, one index=value
//                                           pair per mode, value real or
//                                           re+imi / re-imi
//   "powerlaw:s=2,n0=1,phase=zero"          tail rule; keys s, n0, A
//                                           (default 1), phase in
//                                           {zero, alternating}
//   "modes:...+powerlaw:..."                both parts
CoefficientSpec parse_state_spec(const std::string& text);
std::string format_state_spec(const CoefficientSpec& spec);

} // namespace schrscale
