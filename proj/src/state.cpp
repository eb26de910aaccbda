#include "schrscale/state.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <system_error>

#include "schrscale/errors.hpp"

namespace schrscale {

namespace {

// Window materialization and explicit tail walks refuse to expand past this
// many modes; certified brackets cover everything beyond.
constexpr long kMaxMaterializedModes = 1L << 20;

double tail_cert_tol(double amplitude_sq, double tol) {
    return tol / std::max(amplitude_sq, 1.0);
}

CoefficientSpec scale_spec(CoefficientSpec spec, double factor) {
    for (auto& h : spec.head) h.amplitude *= factor;
    if (spec.tail) spec.tail->amplitude *= factor;
    return spec;
}

// Largest n >= lo with model energy <= bound, or lo - 1 when even E_lo
// exceeds it.  The growth law only seeds the guess; membership is decided
// by the model's own eigenvalues so window edges match energy() exactly.
long last_index_at_or_below(const SpectrumModel& model, long lo, double bound) {
    if (model.energy(lo) > bound) return lo - 1;
    const EnergyLaw law = model.law();
    const double root = std::pow(std::max(bound - law.shift, 0.0) / law.scale,
                                 1.0 / double(law.degree));
    long n = std::max(lo, long(std::min(root, 8.0e18)));
    while (model.energy(n) > bound) --n;
    while (model.energy(n + 1) <= bound) ++n;
    return n;
}

struct TailWindow {
    long first_kept;  // smallest tail index with E_n > a
    long last_kept;   // largest tail index with E_n <= b (may be first_kept - 1)
};

TailWindow tail_window(const SpectrumModel& model, const PowerLawTail& tail,
                       double a, double b) {
    const long start = tail.start;
    const long first = a < model.energy(start)
                           ? start
                           : last_index_at_or_below(model, start, a) + 1;
    const long last = last_index_at_or_below(model, start, b);
    return {first, last};
}

} // namespace

double phase_factor(PhaseRule rule, long n) {
    if (rule == PhaseRule::Zero) return 1.0;
    return n % 2 == 0 ? 1.0 : -1.0;
}

StateVector::StateVector(CoefficientSpec spec, SpectrumModel model, double tol,
                         double tail_time)
    : spec_(std::move(spec)), model_(std::move(model)), tail_time_(tail_time) {
    if (!(tol > 0.0)) throw std::invalid_argument("bracket tolerance must be positive");

    std::sort(spec_.head.begin(), spec_.head.end(),
              [](const HeadMode& a, const HeadMode& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < spec_.head.size(); ++i) {
        const HeadMode& h = spec_.head[i];
        if (!model_.has_index(h.index))
            throw IndexError("head mode " + std::to_string(h.index) +
                             " is not in the spectrum");
        if (!std::isfinite(h.amplitude.real()) || !std::isfinite(h.amplitude.imag()))
            throw std::invalid_argument("head amplitudes must be finite");
        if (i > 0 && spec_.head[i - 1].index == h.index)
            throw std::invalid_argument("duplicate head mode " + std::to_string(h.index));
    }

    KahanSum mass;
    for (const HeadMode& h : spec_.head) mass.add(std::norm(h.amplitude));
    certificate_ = Interval::point(mass.value());

    if (!spec_.tail) return;
    const PowerLawTail& t = *spec_.tail;
    if (model_.kind() == SpectrumKind::Table)
        throw UnsupportedOperation("power-law tails need an eigenvalue growth law");
    if (!(t.exponent > 0.0) || !std::isfinite(t.exponent))
        throw std::invalid_argument("tail exponent must be positive");
    if (t.amplitude < 0.0 || !std::isfinite(t.amplitude))
        throw std::invalid_argument("tail amplitude must be nonnegative");
    if (t.start < 1 || !model_.has_index(t.start))
        throw std::invalid_argument("tail start index must be a mode index >= 1");
    if (!spec_.head.empty() && spec_.head.back().index >= t.start)
        throw std::invalid_argument("head modes must lie below the tail start");

    if (t.amplitude == 0.0) return;
    if (!(t.exponent > 0.5))
        throw NotNormalizable("tail mass diverges for exponents <= 1/2");
    const double a2 = t.amplitude * t.amplitude;
    certificate_ += power_weighted_tail(model_.law(), 0, 2.0 * t.exponent, t.start,
                                        tail_cert_tol(a2, tol))
                        .scaled(a2);
}

std::complex<double> StateVector::coefficient(long n) const {
    const auto it = std::lower_bound(
        spec_.head.begin(), spec_.head.end(), n,
        [](const HeadMode& h, long idx) { return h.index < idx; });
    if (it != spec_.head.end() && it->index == n) return it->amplitude;
    if (!spec_.tail || n < spec_.tail->start) return {};
    const PowerLawTail& t = *spec_.tail;
    const double base = t.amplitude * std::pow(double(n), -t.exponent) *
                        phase_factor(t.phase, n);
    if (tail_time_ == 0.0) return {base, 0.0};
    return base * std::polar(1.0, -model_.energy(n) * tail_time_);
}

std::vector<std::pair<long, std::complex<double>>>
StateVector::coefficients_upto(long n_max) const {
    std::vector<std::pair<long, std::complex<double>>> out;
    for (const HeadMode& h : spec_.head)
        if (h.index <= n_max) out.emplace_back(h.index, h.amplitude);
    if (!spec_.tail || spec_.tail->amplitude == 0.0) return out;
    const PowerLawTail& t = *spec_.tail;
    if (n_max - t.start >= kMaxMaterializedModes)
        throw std::invalid_argument("truncation index materializes too many tail modes");
    for (long n = t.start; n <= n_max; ++n) {
        const double base = t.amplitude * std::pow(double(n), -t.exponent) *
                            phase_factor(t.phase, n);
        if (tail_time_ == 0.0)
            out.emplace_back(n, std::complex<double>{base, 0.0});
        else
            out.emplace_back(n, base * std::polar(1.0, -model_.energy(n) * tail_time_));
    }
    return out;
}

Interval StateVector::truncated_mass(long n_max, double tol) const {
    KahanSum dropped;
    for (const HeadMode& h : spec_.head)
        if (h.index > n_max) dropped.add(std::norm(h.amplitude));
    Interval out = Interval::point(dropped.value());
    if (spec_.tail && spec_.tail->amplitude > 0.0) {
        const PowerLawTail& t = *spec_.tail;
        const double a2 = t.amplitude * t.amplitude;
        const long begin = std::max(t.start, n_max + 1);
        out += power_weighted_tail(model_.law(), 0, 2.0 * t.exponent, begin,
                                   tail_cert_tol(a2, tol))
                   .scaled(a2);
    }
    return out;
}

long StateVector::max_head_index() const {
    return spec_.head.empty() ? model_.min_index() - 1 : spec_.head.back().index;
}

StateVector normalize(const CoefficientSpec& spec, const SpectrumModel& model,
                      double tol) {
    StateVector raw(spec, model, tol / 2.0);
    if (raw.is_zero()) throw EmptyState("cannot normalize a state with zero mass");

    // Prescale by a power of two (exact on every amplitude) so the final
    // inexact factor is applied to a mass already within a factor 2 of 1.
    const double mid = raw.norm_certificate().mid();
    const double coarse = std::exp2(std::round(-0.5 * std::log2(mid)));
    StateVector pre(scale_spec(raw.spec(), coarse), model, tol / 2.0);
    const double fine = 1.0 / std::sqrt(pre.norm_certificate().mid());
    return StateVector(scale_spec(pre.spec(), fine), model, tol / 2.0);
}

NormResult scale_norm(const StateVector& f, int k, double tol) {
    if (k < -2 || k > 2)
        throw std::invalid_argument("scale index must lie in {-2, -1, 0, 1, 2}");
    if (!(tol > 0.0)) throw std::invalid_argument("bracket tolerance must be positive");

    KahanSum head;
    for (const HeadMode& h : f.spec().head)
        head.add(ipow(f.model().energy(h.index), k) * std::norm(h.amplitude));
    Interval total = Interval::point(head.value());

    if (f.spec().tail && f.spec().tail->amplitude > 0.0) {
        const PowerLawTail& t = *f.spec().tail;
        const EnergyLaw law = f.model().law();
        if (power_tail_diverges(law, k, t.exponent))
            return NormResult::divergent(divergence_witness(law, k, t.exponent));
        const double a2 = t.amplitude * t.amplitude;
        total += power_weighted_tail(law, k, 2.0 * t.exponent, t.start,
                                     tail_cert_tol(a2, tol))
                     .scaled(a2);
    }
    return NormResult::finite_value(total);
}

Classification classify(const StateVector& f, double tol) {
    Classification out;
    for (int k = -2; k <= 2; ++k) out.norms[std::size_t(k + 2)] = scale_norm(f, k, tol);
    out.k_star = 0;
    for (int k = 1; k <= 2; ++k)
        if (out.at(k).finite) out.k_star = k;
    return out;
}

NormResult mean_energy(const StateVector& f, double tol) { return scale_norm(f, 1, tol); }

NormResult inverse_energy_mean(const StateVector& f, double tol) {
    return scale_norm(f, -1, tol);
}

StateVector spectral_window(const StateVector& f, double a, double b) {
    if (!(a < b)) throw BadWindow("window needs a < b");
    CoefficientSpec kept;
    for (const HeadMode& h : f.spec().head) {
        const double e = f.model().energy(h.index);
        if (a < e && e <= b) kept.head.push_back(h);
    }
    if (f.spec().tail && f.spec().tail->amplitude != 0.0) {
        const TailWindow w = tail_window(f.model(), *f.spec().tail, a, b);
        if (w.last_kept - w.first_kept >= kMaxMaterializedModes)
            throw std::invalid_argument("window keeps too many tail modes to materialize");
        for (long n = w.first_kept; n <= w.last_kept; ++n)
            kept.head.push_back({n, f.coefficient(n)});
    }
    return StateVector(std::move(kept), f.model());
}

NormResult window_complement_mass(const StateVector& f, double a, double b,
                                  double tol) {
    if (!(a < b)) throw BadWindow("window needs a < b");
    KahanSum removed;
    for (const HeadMode& h : f.spec().head) {
        const double e = f.model().energy(h.index);
        if (!(a < e && e <= b)) removed.add(std::norm(h.amplitude));
    }
    Interval total = Interval::point(removed.value());
    if (f.spec().tail && f.spec().tail->amplitude != 0.0) {
        const PowerLawTail& t = *f.spec().tail;
        const TailWindow w = tail_window(f.model(), t, a, b);
        if (w.first_kept - t.start > kMaxMaterializedModes)
            throw std::invalid_argument("window drops too many low tail modes to walk");
        const double a2 = t.amplitude * t.amplitude;
        KahanSum low;
        for (long n = t.start; n < w.first_kept; ++n)
            low.add(a2 * std::pow(double(n), -2.0 * t.exponent));
        total += Interval::point(low.value());
        total += power_weighted_tail(f.model().law(), 0, 2.0 * t.exponent,
                                     std::max(w.last_kept + 1, t.start),
                                     tail_cert_tol(a2, tol))
                     .scaled(a2);
    }
    return NormResult::finite_value(total);
}

StateVector apply_hamiltonian(const StateVector& f) {
    if (!f.finite_support())
        throw DomainRequired("operator image needs finite support; window the state first");
    CoefficientSpec image;
    image.head.reserve(f.spec().head.size());
    for (const HeadMode& h : f.spec().head)
        image.head.push_back({h.index, h.amplitude * f.model().energy(h.index)});
    return StateVector(std::move(image), f.model());
}

// ── Specification grammar ──────────────────────────────────────────────────

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("bad real number '" + std::string(text) + "'");
    return value;
}

long parse_index(std::string_view text) {
    long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("bad mode index '" + std::string(text) + "'");
    return value;
}

std::complex<double> parse_amplitude(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty amplitude");
    if (text.back() != 'i' && text.back() != 'I') return {parse_real(text), 0.0};
    std::string_view body = text.substr(0, text.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) return {0.0, parse_real(body)};
    return {parse_real(body.substr(0, split)), parse_real(body.substr(split))};
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        const std::size_t pos = text.find(sep, begin);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(begin));
            return out;
        }
        out.push_back(text.substr(begin, pos - begin));
        begin = pos + 1;
    }
}

std::pair<std::string_view, std::string_view> split_key_value(std::string_view item) {
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
        throw std::invalid_argument("expected key=value, got '" + std::string(item) + "'");
    return {item.substr(0, eq), item.substr(eq + 1)};
}

void parse_modes_part(std::string_view body, CoefficientSpec& spec) {
    if (body.empty()) return;
    for (std::string_view item : split_on(body, ',')) {
        const auto [key, value] = split_key_value(item);
        spec.head.push_back({parse_index(key), parse_amplitude(value)});
    }
}

void parse_powerlaw_part(std::string_view body, CoefficientSpec& spec) {
    PowerLawTail tail;
    bool saw_exponent = false;
    for (std::string_view item : split_on(body, ',')) {
        const auto [key, value] = split_key_value(item);
        if (key == "s") {
            tail.exponent = parse_real(value);
            saw_exponent = true;
        } else if (key == "n0") {
            tail.start = parse_index(value);
        } else if (key == "A") {
            tail.amplitude = parse_real(value);
        } else if (key == "phase") {
            if (value == "zero") tail.phase = PhaseRule::Zero;
            else if (value == "alternating") tail.phase = PhaseRule::Alternating;
            else throw std::invalid_argument("unknown phase rule '" + std::string(value) + "'");
        } else {
            throw std::invalid_argument("unknown powerlaw key '" + std::string(key) + "'");
        }
    }
    if (!saw_exponent) throw std::invalid_argument("powerlaw part needs s=<exponent>");
    spec.tail = tail;
}

} // namespace

CoefficientSpec parse_state_spec(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty state specification");

    // '+' joins parts only when it introduces a named part; pluses inside
    // complex amplitudes stay untouched.
    std::vector<std::string_view> parts;
    std::string_view rest = text;
    std::size_t begin = 0;
    for (std::size_t i = 1; i < rest.size(); ++i) {
        if (rest[i] != '+') continue;
        const std::string_view after = rest.substr(i + 1);
        if (after.starts_with("modes:") || after.starts_with("powerlaw:")) {
            parts.push_back(rest.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    parts.push_back(rest.substr(begin));

    CoefficientSpec spec;
    bool saw_modes = false, saw_tail = false;
    for (std::string_view part : parts) {
        if (part.starts_with("modes:")) {
            if (saw_modes) throw std::invalid_argument("duplicate modes part");
            saw_modes = true;
            parse_modes_part(part.substr(6), spec);
        } else if (part.starts_with("powerlaw:")) {
            if (saw_tail) throw std::invalid_argument("duplicate powerlaw part");
            saw_tail = true;
            parse_powerlaw_part(part.substr(9), spec);
        } else {
            throw std::invalid_argument("state part must start with modes: or powerlaw:");
        }
    }
    return spec;
}

std::string format_state_spec(const CoefficientSpec& spec) {
    std::string out;
    if (!spec.head.empty() || !spec.tail) {
        out += "modes:";
        for (std::size_t i = 0; i < spec.head.size(); ++i) {
            if (i > 0) out += ',';
            const HeadMode& h = spec.head[i];
            out += std::to_string(h.index);
            out += '=';
            out += format_double(h.amplitude.real());
            if (h.amplitude.imag() != 0.0) {
                out += h.amplitude.imag() < 0.0 ? '-' : '+';
                out += format_double(std::abs(h.amplitude.imag()));
                out += 'i';
            }
        }
    }
    if (spec.tail) {
        if (!out.empty()) out += '+';
        out += "powerlaw:s=";
        out += format_double(spec.tail->exponent);
        out += ",n0=";
        out += std::to_string(spec.tail->start);
        out += ",A=";
        out += format_double(spec.tail->amplitude);
        out += ",phase=";
        out += spec.tail->phase == PhaseRule::Zero ? "zero" : "alternating";
    }
    return out;
}

} // namespace schrscale
