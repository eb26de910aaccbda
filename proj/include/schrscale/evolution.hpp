#pragma once

#include <complex>
#include <vector>

#include "schrscale/interval.hpp"
#include "schrscale/kernels.hpp"
#include "schrscale/state.hpp"

namespace schrscale {

// Unitary evolution in the eigenbasis: every coefficient picks up the phase
// exp(-i E_n t).  Head amplitudes absorb their phases explicitly; a tail
// keeps its amplitude law untouched and accumulates the phase symbolically,
// so evolution is exactly mass-preserving on every state.
StateVector evolve(const StateVector& f, double t);

struct WaveSamples {
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    double time = 0.0;
    long truncation_index = 0;
    // Bracket on the squared mass left out of the truncated sum; the L2
    // error of the sampled profile is at most sqrt(truncated_mass.hi).
    Interval truncated_mass;

    double truncation_bound() const;
};

// psi(x, t) = sum_{n <= n_max} c_n exp(-i E_n t) phi_n(x) over the grid.
// The truncation index is caller-chosen and the dropped mass is reported,
// never hidden: pointwise profiles of slowly decaying tails depend on it.
WaveSamples synthesize(const StateVector& f, double t, std::vector<double> grid,
                       long n_max);

// ── Multiplier evolutions and the closing operator ─────────────────────────
//
// A multiplier u replaces the phase law: psi_u(t) has coefficients
// c_n exp(-i u(E_n) t).  For u in the family below, lambda - u(lambda) stays
// bounded on the spectrum in use, and the closing operator acts
// coefficientwise as
//
//     [S psi_u(t)]_n = [E_n - u(E_n)] exp(-i u(E_n) t) c_n,
//
// with squared mass at most M |psi|^2 where M bounds |lambda - u(lambda)|^2.
// u(lambda) = lambda makes every coefficient vanish identically.

enum class MultiplierKind { Zero, Sine, Clamp, Table };

class MultiplierSpec {
public:
    // u(lambda) = lambda; deviation identically zero.
    static MultiplierSpec zero();
    // u(lambda) = lambda - alpha sin(lambda); deviation bounded by alpha.
    static MultiplierSpec sine(double alpha);
    // u(lambda) = min(lambda, cap); deviation unbounded over an infinite
    // spectrum, usable on finite expansions only.
    static MultiplierSpec clamp(double cap);
    // Piecewise-constant u: first piece whose range contains lambda wins;
    // modes not covered by any piece are outside the family.
    static MultiplierSpec table(std::vector<std::pair<Interval, double>> pieces);

    MultiplierKind kind() const { return kind_; }
    double sine_amplitude() const { return alpha_; }
    double clamp_cap() const { return cap_; }
    const std::vector<std::pair<Interval, double>>& pieces() const { return pieces_; }

    double value(double lambda) const;                 // u(lambda)
    double deviation(double lambda) const { return lambda - value(lambda); }

    // sup over the state's modes of |lambda - u(lambda)|^2.  Zero and Sine
    // carry analytic global bounds valid for any state; Clamp and Table are
    // evaluated mode-by-mode and reject infinite tails.
    double bound_over(const StateVector& f) const;

private:
    MultiplierKind kind_ = MultiplierKind::Zero;
    double alpha_ = 0.0;
    double cap_ = 0.0;
    std::vector<std::pair<Interval, double>> pieces_;
};

// Coefficient sequence of S psi_u(t), kept implicit: head images are listed
// explicitly, tail images are reachable through coefficient(n), and the
// squared mass carries a certified bracket (exact head sum; tail bracketed
// through the deviation bound).
class ExtensionResult {
public:
    const ModeTerms& head_terms() const { return head_terms_; }
    const Interval& squared_mass() const { return squared_mass_; }
    double bound() const { return bound_; }
    double time() const { return time_; }

    std::complex<double> coefficient(long n) const;

private:
    friend ExtensionResult apply_extension(const StateVector&, const MultiplierSpec&,
                                           double);
    StateVector source_;
    MultiplierSpec multiplier_;
    ModeTerms head_terms_;
    Interval squared_mass_;
    double bound_ = 0.0;
    double time_ = 0.0;

    ExtensionResult(StateVector source, MultiplierSpec multiplier, double time)
        : source_(std::move(source)), multiplier_(std::move(multiplier)), time_(time) {}
};

ExtensionResult apply_extension(const StateVector& f, const MultiplierSpec& u,
                                double t);

// Uniform bound on the closing operator: lhs is the squared mass of
// S psi_u(t) (bracket top), rhs is bound * squared mass of f (bracket top),
// and lhs <= rhs + 1e-12 holds by shared tail bounds.
struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
};

BoundCheck extension_bound_check(const StateVector& f, const MultiplierSpec& u,
                                 double t);

} // namespace schrscale
