#include "schrscale/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "schrscale/errors.hpp"
#include "schrscale/kernels.hpp"
#include "schrscale/parallel.hpp"
#include "schrscale/rng.hpp"

namespace schrscale {

namespace {

constexpr long kQuadraturePoints = 1L << 14;
constexpr std::size_t kMaxSnapshots = 33;

// Frozen view of a finite expansion: raw coefficients plus energies, so any
// time slice is one phase rotation away.
struct ModeBasis {
    const SpectrumModel* model = nullptr;
    std::vector<long> indices;
    std::vector<std::complex<double>> amplitudes;
    std::vector<double> energies;
    double wall = 0.0;
    bool bounded = false;
};

ModeBasis make_basis(const StateVector& state) {
    if (!state.finite_support())
        throw DomainRequired("state not in the operator domain; window it first");
    if (!state.model().has_eigenfunctions())
        throw UnsupportedOperation("tabulated spectra have no eigenfunctions to follow");
    ModeBasis basis;
    basis.model = &state.model();
    for (const auto& [n, amp] : state.coefficients_upto(state.max_head_index())) {
        basis.indices.push_back(n);
        basis.amplitudes.push_back(amp);
        basis.energies.push_back(state.model().energy(n));
    }
    if (basis.indices.empty()) throw EmptyState("state has no modes to follow");
    if (state.model().kind() == SpectrumKind::Box) {
        basis.bounded = true;
        basis.wall = state.model().length();
    }
    return basis;
}

ModeTerms terms_at(const ModeBasis& basis, double t) {
    ModeTerms terms(basis.indices.size());
    for (std::size_t i = 0; i < basis.indices.size(); ++i)
        terms[i] = {basis.indices[i],
                    basis.amplitudes[i] * std::polar(1.0, -basis.energies[i] * t)};
    return terms;
}

struct FlowSample {
    double rho = 0.0;
    double v = 0.0;
    double osmotic = 0.0;
    bool ok = false;
};

// Current and osmotic velocities at one point; ok is false inside the node
// guard or when the quotients are not finite, so integrator loops can freeze
// a path without throwing.
FlowSample flow_at(const ModeBasis& basis, const ModeTerms& terms, double x) {
    const kernels::WavePoint w = kernels::synth_point(*basis.model, terms, x);
    FlowSample s;
    s.rho = std::norm(w.value);
    if (!(s.rho > kNodeEpsilon)) return s;
    const std::complex<double> cross = w.derivative * std::conj(w.value);
    s.v = 2.0 * cross.imag() / s.rho;
    s.osmotic = 2.0 * cross.real() / s.rho;
    s.ok = std::isfinite(s.v) && std::isfinite(s.osmotic);
    return s;
}

double clamp_to_domain(const ModeBasis& basis, double x) {
    return basis.bounded ? std::clamp(x, 0.0, basis.wall) : x;
}

// Fold a proposed position back through the walls.  fmod keeps this O(1)
// even for wild overshoots.
double reflect(const ModeBasis& basis, double x) {
    if (!basis.bounded) return x;
    const double period = 2.0 * basis.wall;
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    if (y > basis.wall) y = period - y;
    return y;
}

struct Schedule {
    long steps = 0;
    std::vector<long> record_steps;
    std::vector<double> times;
};

Schedule make_schedule(double t_span, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw BadStep("dt must be positive");
    if (!(t_span > 0.0) || !std::isfinite(t_span))
        throw std::invalid_argument("t_span must be positive");
    Schedule sched;
    sched.steps = std::llround(t_span / dt);
    if (sched.steps < 1 ||
        std::abs(double(sched.steps) * dt - t_span) > 1e-9 * t_span)
        throw BadStep("t_span must be a whole number of steps");
    const long slots = long(kMaxSnapshots) - 1;
    const long stride = std::max(1L, (sched.steps + slots - 1) / slots);
    for (long s = 0; s < sched.steps; s += stride) sched.record_steps.push_back(s);
    sched.record_steps.push_back(sched.steps);
    for (long s : sched.record_steps) sched.times.push_back(double(s) * dt);
    return sched;
}

// One classic 4-stage step of dx/dt = v(x, t) using prebuilt coefficient
// slices at the step's start, midpoint, and end.  Returns false when any
// stage lands inside the node guard.
bool rk4_step(const ModeBasis& basis, const ModeTerms& t0, const ModeTerms& tm,
              const ModeTerms& t1, double h, double& x) {
    const FlowSample s1 = flow_at(basis, t0, x);
    if (!s1.ok) return false;
    const FlowSample s2 = flow_at(basis, tm, clamp_to_domain(basis, x + 0.5 * h * s1.v));
    if (!s2.ok) return false;
    const FlowSample s3 = flow_at(basis, tm, clamp_to_domain(basis, x + 0.5 * h * s2.v));
    if (!s3.ok) return false;
    const FlowSample s4 = flow_at(basis, t1, clamp_to_domain(basis, x + h * s3.v));
    if (!s4.ok) return false;
    x = clamp_to_domain(basis, x + h / 6.0 * (s1.v + 2.0 * s2.v + 2.0 * s3.v + s4.v));
    return std::isfinite(x);
}

// Cumulative distribution of |psi(., t)|^2 on a fine grid, driving both
// inverse-CDF sampling and Kolmogorov-Smirnov comparisons.  Oscillator
// states are windowed past the top mode's classical turning point, where
// the remaining mass is far below quadrature resolution.
struct DensityTable {
    std::vector<double> xs;
    std::vector<double> cdf;

    double cdf_at(double x) const {
        if (x <= xs.front()) return 0.0;
        if (x >= xs.back()) return 1.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = std::size_t(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return cdf[i - 1] + w * (cdf[i] - cdf[i - 1]);
    }

    double quantile(double u) const {
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.begin()) return xs.front();
        if (it == cdf.end()) return xs.back();
        const std::size_t i = std::size_t(it - cdf.begin());
        const double run = cdf[i] - cdf[i - 1];
        if (run <= 0.0) return xs[i - 1];
        return xs[i - 1] + (u - cdf[i - 1]) / run * (xs[i] - xs[i - 1]);
    }
};

DensityTable build_density_table(const ModeBasis& basis, double t) {
    double lo = 0.0, hi = basis.wall;
    if (!basis.bounded) {
        hi = std::sqrt(2.0 * basis.energies.back()) + 8.0;
        lo = -hi;
    }
    const UniformGrid grid{lo, hi, kQuadraturePoints};
    DensityTable table;
    table.xs.resize(std::size_t(grid.points));
    for (long i = 0; i < grid.points; ++i) table.xs[std::size_t(i)] = grid.at(i);
    const std::vector<std::complex<double>> values =
        kernels::synth_values(*basis.model, terms_at(basis, t), table.xs);
    table.cdf.assign(table.xs.size(), 0.0);
    double run = 0.0;
    for (std::size_t i = 1; i < table.xs.size(); ++i) {
        run += 0.5 * (std::norm(values[i - 1]) + std::norm(values[i])) *
               (table.xs[i] - table.xs[i - 1]);
        table.cdf[i] = run;
    }
    if (!(run > 0.0))
        throw EmptyState("state carries no probability mass on the sampling window");
    for (double& c : table.cdf) c /= run;
    return table;
}

void record_slot(TrajectoryEnsemble& out, const std::vector<double>& current,
                 std::size_t slot) {
    const std::size_t stride = out.times.size();
    for (std::size_t p = 0; p < current.size(); ++p)
        out.positions[p * stride + slot] = current[p];
}

void finish_breach_count(TrajectoryEnsemble& out) {
    out.breach_count = std::count(out.breached.begin(), out.breached.end(),
                                  (unsigned char)1);
}

} // namespace

double velocity(const StateVector& state, double t, double x) {
    if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
    const ModeBasis basis = make_basis(state);
    const kernels::WavePoint w =
        kernels::synth_point(*basis.model, terms_at(basis, t), x);
    const double rho = std::norm(w.value);
    if (!(rho > kNodeEpsilon))
        throw NodeProximity("density at the requested point is inside the node guard");
    return 2.0 * (w.derivative * std::conj(w.value)).imag() / rho;
}

TrajectoryEnsemble integrate_bohmian(const StateVector& state,
                                     const std::vector<double>& x0s,
                                     double t_span, double dt) {
    const ModeBasis basis = make_basis(state);
    const Schedule sched = make_schedule(t_span, dt);
    if (x0s.empty()) throw std::invalid_argument("no starting points");
    for (double x0 : x0s) {
        if (!std::isfinite(x0))
            throw std::invalid_argument("starting points must be finite");
        if (basis.bounded && (x0 < 0.0 || x0 > basis.wall))
            throw DomainError("starting point outside the box");
    }

    TrajectoryEnsemble out;
    out.kind = TrajectoryEnsemble::Kind::Bohmian;
    out.times = sched.times;
    out.path_count = long(x0s.size());
    out.dt = dt;
    out.breached.assign(x0s.size(), 0);
    out.positions.assign(x0s.size() * sched.times.size(), 0.0);

    std::vector<double> current = x0s;
    ModeTerms terms_now = terms_at(basis, 0.0);
    std::size_t slot = 0;
    for (long step = 0; step <= sched.steps; ++step) {
        if (slot < sched.record_steps.size() && sched.record_steps[slot] == step)
            record_slot(out, current, slot++);
        if (step == sched.steps) break;
        const double t = double(step) * dt;
        const ModeTerms terms_mid = terms_at(basis, t + 0.5 * dt);
        ModeTerms terms_next = terms_at(basis, t + dt);
        parallel_for(out.path_count, [&](long p) {
            const std::size_t ip = std::size_t(p);
            if (out.breached[ip]) return;
            double x = current[ip];
            const FlowSample here = flow_at(basis, terms_now, x);
            bool alive;
            if (!(here.rho > kNodeEpsilon)) {
                alive = false;
            } else if (here.rho < 10.0 * kNodeEpsilon) {
                // Refined passage close to a node: ten sub-steps with their
                // own coefficient slices.
                alive = true;
                const double h = dt / 10.0;
                for (int j = 0; j < 10 && alive; ++j) {
                    const double tj = t + double(j) * h;
                    alive = rk4_step(basis, terms_at(basis, tj),
                                     terms_at(basis, tj + 0.5 * h),
                                     terms_at(basis, tj + h), h, x);
                }
            } else {
                alive = rk4_step(basis, terms_now, terms_mid, terms_next, dt, x);
            }
            if (alive)
                current[ip] = x;
            else
                out.breached[ip] = 1;
        });
        terms_now = std::move(terms_next);
    }

    // Flow lines of a first-order ODE in one dimension cannot cross, so the
    // surviving paths must keep their starting order at every snapshot.
    std::vector<std::size_t> order(x0s.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x0s[a] < x0s[b]; });
    for (std::size_t k = 0; k < sched.times.size() && out.ordering_ok; ++k) {
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t idx : order) {
            if (out.breached[idx]) continue;
            const double xi = out.positions[idx * sched.times.size() + k];
            if (xi < prev - 1e-12) {
                out.ordering_ok = false;
                break;
            }
            prev = std::max(prev, xi);
        }
    }
    finish_breach_count(out);
    return out;
}

TrajectoryEnsemble sample_nelson(const StateVector& state, long paths,
                                 double t_span, double dt, std::uint64_t seed) {
    if (paths < 1) throw std::invalid_argument("need at least one path");
    const ModeBasis basis = make_basis(state);
    const Schedule sched = make_schedule(t_span, dt);
    const DensityTable table = build_density_table(basis, 0.0);

    TrajectoryEnsemble out;
    out.kind = TrajectoryEnsemble::Kind::Nelson;
    out.times = sched.times;
    out.path_count = paths;
    out.seed = seed;
    out.dt = dt;
    out.breached.assign(std::size_t(paths), 0);
    out.positions.assign(std::size_t(paths) * sched.times.size(), 0.0);

    std::vector<NormalStream> streams;
    streams.reserve(std::size_t(paths));
    std::vector<double> current(std::size_t(paths), 0.0);
    for (long p = 0; p < paths; ++p) {
        streams.emplace_back(path_stream_seed(seed, std::uint64_t(p)));
        current[std::size_t(p)] = table.quantile(streams.back().bits.next_unit());
    }

    const double noise = std::sqrt(2.0 * dt);
    std::size_t slot = 0;
    for (long step = 0; step <= sched.steps; ++step) {
        if (slot < sched.record_steps.size() && sched.record_steps[slot] == step)
            record_slot(out, current, slot++);
        if (step == sched.steps) break;
        const ModeTerms terms = terms_at(basis, double(step) * dt);
        parallel_for(paths, [&](long p) {
            const std::size_t ip = std::size_t(p);
            if (out.breached[ip]) return;
            const FlowSample s = flow_at(basis, terms, current[ip]);
            const double drift = s.v + s.osmotic;
            if (!s.ok || !std::isfinite(drift)) {
                out.breached[ip] = 1;
                return;
            }
            const double proposal =
                current[ip] + drift * dt + noise * streams[ip].next();
            const double next = reflect(basis, proposal);
            if (std::isfinite(next))
                current[ip] = next;
            else
                out.breached[ip] = 1;
        });
    }
    finish_breach_count(out);
    return out;
}

std::vector<double> sample_initial_positions(const StateVector& state, long paths,
                                             std::uint64_t seed) {
    if (paths < 1) throw std::invalid_argument("need at least one path");
    const ModeBasis basis = make_basis(state);
    const DensityTable table = build_density_table(basis, 0.0);
    std::vector<double> xs(std::size_t(paths), 0.0);
    for (long p = 0; p < paths; ++p) {
        SplitMix64 bits(path_stream_seed(seed, std::uint64_t(p)));
        xs[std::size_t(p)] = table.quantile(bits.next_unit());
    }
    return xs;
}

double equivariance_statistic(const TrajectoryEnsemble& ensemble,
                              const StateVector& state, double t) {
    if (ensemble.times.empty() || ensemble.path_count < 1)
        throw std::invalid_argument("empty ensemble");
    std::size_t slot = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ensemble.times.size(); ++k) {
        const double d = std::abs(ensemble.times[k] - t);
        if (d < gap) {
            gap = d;
            slot = k;
        }
    }
    if (gap > 0.5 * ensemble.dt + 1e-12)
        throw std::invalid_argument("t does not match a recorded snapshot time");

    const ModeBasis basis = make_basis(state);
    const DensityTable table = build_density_table(basis, ensemble.times[slot]);
    std::vector<double> sample(std::size_t(ensemble.path_count), 0.0);
    for (long p = 0; p < ensemble.path_count; ++p)
        sample[std::size_t(p)] = ensemble.position(p, slot);
    std::sort(sample.begin(), sample.end());

    const double n = double(sample.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = table.cdf_at(sample[i]);
        dist = std::max(dist, std::max(F - double(i) / n, double(i + 1) / n - F));
    }
    return dist;
}

} // namespace schrscale
