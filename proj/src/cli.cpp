#include "schrscale/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "schrscale/diagnostics.hpp"
#include "schrscale/errors.hpp"
#include "schrscale/evolution.hpp"
#include "schrscale/trajectories.hpp"

namespace schrscale::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find(sep, begin);
        if (end == std::string::npos) {
            parts.push_back(text.substr(begin));
            break;
        }
        parts.push_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
    return parts;
}

double parse_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" +
                                    text + "'");
    }
}

long parse_long(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" +
                                    text + "'");
    }
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> values;
    for (const std::string& part : split_list(text, ','))
        values.push_back(parse_double(part, what));
    return values;
}

std::vector<std::pair<long, double>> parse_levels(const std::string& text) {
    std::vector<std::pair<long, double>> levels;
    for (const std::string& part : split_list(text, ',')) {
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("levels need the form n=E,n=E,...");
        levels.emplace_back(parse_long(part.substr(0, eq), "level index"),
                            parse_double(part.substr(eq + 1), "level energy"));
    }
    return levels;
}

std::vector<std::pair<Interval, double>> parse_pieces(const std::string& text) {
    std::vector<std::pair<Interval, double>> pieces;
    for (const std::string& part : split_list(text, ',')) {
        const std::size_t eq = part.find('=');
        const std::size_t colon = part.find(':');
        if (eq == std::string::npos || colon == std::string::npos || colon > eq)
            throw std::invalid_argument("pieces need the form lo:hi=value,...");
        pieces.emplace_back(
            Interval::of(parse_double(part.substr(0, colon), "piece start"),
                         parse_double(part.substr(colon + 1, eq - colon - 1),
                                      "piece end")),
            parse_double(part.substr(eq + 1), "piece value"));
    }
    return pieces;
}

SpectrumModel build_model(const RunConfig& cfg) {
    if (cfg.model == "box")
        return cfg.shift ? SpectrumModel::box(cfg.length, *cfg.shift)
                         : SpectrumModel::box(cfg.length);
    if (cfg.model == "oscillator")
        return cfg.shift ? SpectrumModel::oscillator(*cfg.shift)
                         : SpectrumModel::oscillator();
    if (cfg.model == "table") {
        if (cfg.levels.empty())
            throw std::invalid_argument("table model needs --levels");
        return cfg.shift ? SpectrumModel::table(parse_levels(cfg.levels), *cfg.shift)
                         : SpectrumModel::table(parse_levels(cfg.levels));
    }
    throw std::invalid_argument("unknown model '" + cfg.model + "'");
}

StateVector build_state(const RunConfig& cfg, const SpectrumModel& model) {
    if (cfg.state.empty()) throw std::invalid_argument("missing --state");
    StateVector st = normalize(parse_state_spec(cfg.state), model, cfg.tol);
    if (cfg.window_lo.has_value() != cfg.window_hi.has_value())
        throw std::invalid_argument("window needs both endpoints");
    if (cfg.window_lo) st = spectral_window(st, *cfg.window_lo, *cfg.window_hi);
    return st;
}

MultiplierSpec build_multiplier(const RunConfig& cfg) {
    if (cfg.multiplier == "zero") return MultiplierSpec::zero();
    if (cfg.multiplier == "sine") return MultiplierSpec::sine(cfg.alpha);
    if (cfg.multiplier == "clamp") return MultiplierSpec::clamp(cfg.cap);
    if (cfg.multiplier == "table") return MultiplierSpec::table(parse_pieces(cfg.pieces));
    throw std::invalid_argument("unknown multiplier '" + cfg.multiplier + "'");
}

nlohmann::json interval_json(const Interval& v) {
    return {{"lo", v.lo}, {"hi", v.hi}};
}

nlohmann::json norm_json(const NormResult& r) {
    if (!r.finite) return {{"finite", false}, {"witness", r.witness}};
    return {{"finite", true}, {"lo", r.value.lo}, {"hi", r.value.hi}};
}

std::string brief_norm(const NormResult& r) {
    if (!r.finite) return "divergent (witness " + fmt6(r.witness) + ")";
    return "[" + fmt6(r.value.lo) + ", " + fmt6(r.value.hi) + "]";
}

// Fills in every value a replay needs that was defaulted rather than given:
// truncation indices, grids, step ladders, scale ladders.
void resolve(RunConfig& cfg, const SpectrumModel& model, const StateVector& state) {
    if (cfg.command == "evolve" || cfg.command == "fractal") {
        if (!model.has_eigenfunctions())
            throw UnsupportedOperation("tabulated spectra cannot be sampled in space");
        if (cfg.points == 0) cfg.points = cfg.command == "evolve" ? 1024 : 16384;
        if (cfg.points < 2) throw std::invalid_argument("need at least 2 grid points");
        if (!cfg.n_max)
            cfg.n_max = state.finite_support()
                            ? state.max_head_index()
                            : std::max(state.max_head_index(), long(4096));
        if (!cfg.grid_lo || !cfg.grid_hi) {
            if (model.kind() == SpectrumKind::Box) {
                cfg.grid_lo = 0.0;
                cfg.grid_hi = model.length();
            } else {
                const double reach = std::sqrt(2.0 * model.energy(*cfg.n_max)) + 8.0;
                cfg.grid_lo = -reach;
                cfg.grid_hi = reach;
            }
        }
    }
    if (cfg.command == "strong-check" && cfg.steps.empty())
        cfg.steps = default_step_sequence();
    if (cfg.command == "fractal" && cfg.scales.empty()) {
        const double span = *cfg.grid_hi - *cfg.grid_lo;
        if (!(span > 0.0)) throw std::invalid_argument("grid must have positive span");
        // Halve from a quarter of the span down to where each box still
        // holds several samples.
        for (double eps = span / 4.0; eps * double(cfg.points) >= 8.0 * span;
             eps /= 2.0)
            cfg.scales.push_back(eps);
        if (cfg.scales.size() < 3)
            throw std::invalid_argument("grid too coarse for box counting");
    }
}

std::vector<double> make_grid(double lo, double hi, long points) {
    std::vector<double> grid(std::size_t(points), 0.0);
    const double spacing = (hi - lo) / double(points - 1);
    for (long i = 0; i < points; ++i) grid[std::size_t(i)] = lo + spacing * double(i);
    return grid;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("stdout write failed");
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed on " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp + " into place: " + ec.message());
}

std::string json_document(const nlohmann::json& config, const nlohmann::json& result) {
    const nlohmann::json doc = {{"config", config}, {"result", result}};
    return doc.dump(2) + "\n";
}

void run_classify(const RunConfig& cfg, const SpectrumModel&, const StateVector& state,
                  const nlohmann::json& config, const std::string& output,
                  std::ostream& err) {
    const Classification c = classify(state, cfg.tol);
    const NormResult mean = mean_energy(state, cfg.tol);
    nlohmann::json norms;
    for (int k = -2; k <= 2; ++k) norms[std::to_string(k)] = norm_json(c.at(k));
    nlohmann::json result = {
        {"k_star", c.k_star},
        {"in_domain", c.in_operator_domain()},
        {"finite_mean_energy", c.finite_mean_energy()},
        {"norms", norms},
        {"mean_energy", norm_json(mean)},
        {"inverse_energy_mean", norm_json(inverse_energy_mean(state, cfg.tol))},
        {"mass", interval_json(state.norm_certificate())},
    };
    emit(output, json_document(config, result));
    err << "k*=" << c.k_star << "; in domain: " << (c.in_operator_domain() ? "yes" : "no")
        << "; mean energy " << brief_norm(mean) << "\n";
}

void run_norms(const RunConfig& cfg, const SpectrumModel&, const StateVector& state,
               const nlohmann::json& config, const std::string& output,
               std::ostream& err) {
    const Classification c = classify(state, cfg.tol);
    nlohmann::json norms;
    for (int k = -2; k <= 2; ++k) norms[std::to_string(k)] = norm_json(c.at(k));
    nlohmann::json result = {
        {"k_star", c.k_star},
        {"norms", norms},
        {"mass", interval_json(state.norm_certificate())},
    };
    emit(output, json_document(config, result));
    err << "squared norms k=-2..2 written; k*=" << c.k_star << "\n";
}

void run_evolve(const RunConfig& cfg, const SpectrumModel&, const StateVector& state,
                const nlohmann::json& config, const std::string& output,
                std::ostream& err) {
    const WaveSamples ws = synthesize(
        state, cfg.time, make_grid(*cfg.grid_lo, *cfg.grid_hi, cfg.points), *cfg.n_max);
    const nlohmann::json summary = {
        {"points", cfg.points},
        {"time", ws.time},
        {"truncation_index", ws.truncation_index},
        {"truncated_mass", interval_json(ws.truncated_mass)},
        {"truncation_bound", ws.truncation_bound()},
    };
    std::string csv = "# config " + config.dump() + "\n# summary " + summary.dump() +
                      "\nx,re,im,density\n";
    for (std::size_t i = 0; i < ws.grid.size(); ++i) {
        csv += fmt17(ws.grid[i]);
        csv += ',';
        csv += fmt17(ws.values[i].real());
        csv += ',';
        csv += fmt17(ws.values[i].imag());
        csv += ',';
        csv += fmt17(std::norm(ws.values[i]));
        csv += '\n';
    }
    emit(output, csv);
    err << "profile at t=" << fmt6(ws.time) << " on " << cfg.points
        << " points; dropped mass <= " << fmt6(ws.truncation_bound()) << "\n";
}

void run_weak_check(const RunConfig& cfg, const SpectrumModel& model,
                    const StateVector& state, const nlohmann::json& config,
                    const std::string& output, std::ostream& err) {
    const double residual = weak_residual(state, cfg.mode, cfg.time, cfg.step);
    nlohmann::json result = {
        {"mode", cfg.mode},
        {"energy", model.energy(cfg.mode)},
        {"residual", residual},
        {"coefficient_abs", std::abs(state.coefficient(cfg.mode))},
    };
    emit(output, json_document(config, result));
    err << "weak residual " << fmt6(residual) << " at mode " << cfg.mode << ", h="
        << fmt6(cfg.step) << "\n";
}

void run_strong_check(const RunConfig& cfg, const SpectrumModel&,
                      const StateVector& state, const nlohmann::json& config,
                      const std::string& output, std::ostream& err) {
    const StrongVerdict v = strong_diff_verdict(state, cfg.time, cfg.steps, cfg.tol);
    const char* verdict = v.outcome == StrongVerdict::Outcome::Converges ? "Converges"
                          : v.outcome == StrongVerdict::Outcome::Diverges
                              ? "Diverges"
                              : "Inconclusive";
    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& [h, r] : v.residuals) {
        nlohmann::json row = norm_json(r);
        row["h"] = h;
        residuals.push_back(row);
    }
    nlohmann::json result = {{"verdict", verdict}, {"residuals", residuals}};
    if (v.slope) result["slope"] = *v.slope;
    emit(output, json_document(config, result));
    err << "strong verdict: " << verdict;
    if (v.slope) err << " (slope " << fmt6(*v.slope) << ")";
    err << "\n";
}

void run_extension(const RunConfig& cfg, const SpectrumModel&,
                   const StateVector& state, const nlohmann::json& config,
                   const std::string& output, std::ostream& err) {
    const MultiplierSpec u = build_multiplier(cfg);
    const ExtensionResult image = apply_extension(state, u, cfg.time);
    const BoundCheck check = extension_bound_check(state, u, cfg.time);
    nlohmann::json result = {
        {"bound", image.bound()},
        {"squared_mass", interval_json(image.squared_mass())},
        {"lhs", check.lhs},
        {"rhs", check.rhs},
        {"holds", check.lhs <= check.rhs + 1e-12},
    };
    emit(output, json_document(config, result));
    err << "closing-operator mass " << fmt6(check.lhs) << " <= " << fmt6(check.rhs)
        << (check.lhs <= check.rhs + 1e-12 ? " (holds)" : " (violated)") << "\n";
}

void run_trajectories(const RunConfig& cfg, const SpectrumModel&,
                      const StateVector& state, const nlohmann::json& config,
                      const std::string& output, std::ostream& err) {
    TrajectoryEnsemble ens;
    if (cfg.kind == "bohmian") {
        ens = integrate_bohmian(state,
                                sample_initial_positions(state, cfg.paths, cfg.seed),
                                cfg.t_span, cfg.dt);
        ens.seed = cfg.seed;
    } else if (cfg.kind == "nelson") {
        ens = sample_nelson(state, cfg.paths, cfg.t_span, cfg.dt, cfg.seed);
    } else {
        throw std::invalid_argument("kind must be bohmian or nelson");
    }
    const double ks = equivariance_statistic(ens, state, ens.times.back());
    nlohmann::json summary = {
        {"ks_final", ks},
        {"breach_count", ens.breach_count},
        {"breach_fraction", double(ens.breach_count) / double(ens.path_count)},
        {"snapshots", ens.times.size()},
        {"paths", ens.path_count},
    };
    if (cfg.kind == "bohmian") summary["ordering_ok"] = ens.ordering_ok;
    std::string csv = "# config " + config.dump() + "\n# summary " + summary.dump() +
                      "\nt,path_id,x\n";
    for (std::size_t k = 0; k < ens.times.size(); ++k) {
        const std::string t_text = fmt17(ens.times[k]);
        for (long p = 0; p < ens.path_count; ++p) {
            csv += t_text;
            csv += ',';
            csv += std::to_string(p);
            csv += ',';
            csv += fmt17(ens.position(p, k));
            csv += '\n';
        }
    }
    emit(output, csv);
    err << cfg.kind << ": " << cfg.paths << " paths to t=" << fmt6(cfg.t_span)
        << "; KS(final)=" << fmt6(ks) << "; breaches " << ens.breach_count << "\n";
}

void run_fractal(const RunConfig& cfg, const SpectrumModel&, const StateVector& state,
                 const nlohmann::json& config, const std::string& output,
                 std::ostream& err) {
    const WaveSamples ws = synthesize(
        state, cfg.time, make_grid(*cfg.grid_lo, *cfg.grid_hi, cfg.points), *cfg.n_max);
    const BoxCountResult box = box_count_dimension(ws, cfg.scales);
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& [eps, n] : box.counts) counts.push_back({eps, n});
    nlohmann::json result = {
        {"dimension", box.dimension},
        {"fit_residual", box.fit_residual},
        {"counts", counts},
        {"truncation_bound", ws.truncation_bound()},
    };
    emit(output, json_document(config, result));
    err << "box-count dimension " << fmt6(box.dimension) << " (fit residual "
        << fmt6(box.fit_residual) << ") over " << box.counts.size() << " scales\n";
}

RunConfig read_embedded_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read " + path);
    const std::string tag = "# config ";
    if (text.rfind(tag, 0) == 0) {
        const std::size_t end = text.find('\n');
        return config_from_json(
            nlohmann::json::parse(text.substr(tag.size(), end - tag.size())));
    }
    return config_from_json(nlohmann::json::parse(text).at("config"));
}

} // namespace

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["command"] = cfg.command;
    j["model"] = cfg.model;
    if (cfg.model == "box") j["length"] = cfg.length;
    if (cfg.shift) j["shift"] = *cfg.shift;
    if (cfg.model == "table") j["levels"] = cfg.levels;
    j["state"] = cfg.state;
    j["tol"] = cfg.tol;
    if (cfg.window_lo) j["window_lo"] = *cfg.window_lo;
    if (cfg.window_hi) j["window_hi"] = *cfg.window_hi;
    if (cfg.command == "evolve" || cfg.command == "fractal") {
        j["time"] = cfg.time;
        j["points"] = cfg.points;
        if (cfg.n_max) j["n_max"] = *cfg.n_max;
        if (cfg.grid_lo) j["grid_lo"] = *cfg.grid_lo;
        if (cfg.grid_hi) j["grid_hi"] = *cfg.grid_hi;
    }
    if (cfg.command == "fractal") j["scales"] = cfg.scales;
    if (cfg.command == "weak-check") {
        j["mode"] = cfg.mode;
        j["time"] = cfg.time;
        j["step"] = cfg.step;
    }
    if (cfg.command == "strong-check") {
        j["time"] = cfg.time;
        j["steps"] = cfg.steps;
    }
    if (cfg.command == "extension") {
        j["multiplier"] = cfg.multiplier;
        j["time"] = cfg.time;
        if (cfg.multiplier == "sine") j["alpha"] = cfg.alpha;
        if (cfg.multiplier == "clamp") j["cap"] = cfg.cap;
        if (cfg.multiplier == "table") j["pieces"] = cfg.pieces;
    }
    if (cfg.command == "trajectories") {
        j["kind"] = cfg.kind;
        j["paths"] = cfg.paths;
        j["t_span"] = cfg.t_span;
        j["dt"] = cfg.dt;
        j["seed"] = cfg.seed;
    }
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    if (j.contains("model")) cfg.model = j["model"].get<std::string>();
    if (j.contains("length")) cfg.length = j["length"].get<double>();
    if (j.contains("shift")) cfg.shift = j["shift"].get<double>();
    if (j.contains("levels")) cfg.levels = j["levels"].get<std::string>();
    if (j.contains("state")) cfg.state = j["state"].get<std::string>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("window_lo")) cfg.window_lo = j["window_lo"].get<double>();
    if (j.contains("window_hi")) cfg.window_hi = j["window_hi"].get<double>();
    if (j.contains("time")) cfg.time = j["time"].get<double>();
    if (j.contains("mode")) cfg.mode = j["mode"].get<long>();
    if (j.contains("step")) cfg.step = j["step"].get<double>();
    if (j.contains("steps")) cfg.steps = j["steps"].get<std::vector<double>>();
    if (j.contains("points")) cfg.points = j["points"].get<long>();
    if (j.contains("n_max")) cfg.n_max = j["n_max"].get<long>();
    if (j.contains("grid_lo")) cfg.grid_lo = j["grid_lo"].get<double>();
    if (j.contains("grid_hi")) cfg.grid_hi = j["grid_hi"].get<double>();
    if (j.contains("scales")) cfg.scales = j["scales"].get<std::vector<double>>();
    if (j.contains("multiplier")) cfg.multiplier = j["multiplier"].get<std::string>();
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("cap")) cfg.cap = j["cap"].get<double>();
    if (j.contains("pieces")) cfg.pieces = j["pieces"].get<std::string>();
    if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
    if (j.contains("paths")) cfg.paths = j["paths"].get<long>();
    if (j.contains("t_span")) cfg.t_span = j["t_span"].get<double>();
    if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

void execute(const RunConfig& raw, const std::string& output_path, std::ostream& err) {
    RunConfig cfg = raw;
    const SpectrumModel model = build_model(cfg);
    const StateVector state = build_state(cfg, model);
    resolve(cfg, model, state);

    nlohmann::json config = config_json(cfg);
    config["shift_applied"] = model.shift_applied();

    if (cfg.command == "classify")
        run_classify(cfg, model, state, config, output_path, err);
    else if (cfg.command == "norms")
        run_norms(cfg, model, state, config, output_path, err);
    else if (cfg.command == "evolve")
        run_evolve(cfg, model, state, config, output_path, err);
    else if (cfg.command == "weak-check")
        run_weak_check(cfg, model, state, config, output_path, err);
    else if (cfg.command == "strong-check")
        run_strong_check(cfg, model, state, config, output_path, err);
    else if (cfg.command == "extension")
        run_extension(cfg, model, state, config, output_path, err);
    else if (cfg.command == "trajectories")
        run_trajectories(cfg, model, state, config, output_path, err);
    else if (cfg.command == "fractal")
        run_fractal(cfg, model, state, config, output_path, err);
    else
        throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

int main_entry(int argc, char** argv) {
    RunConfig cfg;
    std::string output;
    std::string window_text;
    std::string steps_text;
    std::string scales_text;
    std::string replay_file;

    CLI::App app{"spectral workbench: scale norms, phase dynamics, extensions, "
                 "trajectories"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "",
                   "read option defaults from an INI file ([subcommand] sections)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "spectrum kind: box, oscillator, table")
            ->check(CLI::IsMember({"box", "oscillator", "table"}));
        sub->add_option("--length", cfg.length, "box length (default pi)");
        sub->add_option("--shift", cfg.shift, "requested spectrum shift");
        sub->add_option("--levels", cfg.levels, "table levels as n=E,n=E,...");
        sub->add_option("--state", cfg.state,
                        "state spec, e.g. \"modes:1=0.7,2=0.7\" or \"powerlaw:s=2\"")
            ->required();
        sub->add_option("--window", window_text, "keep modes with a < E_n <= b, as a:b");
        sub->add_option("--tol", cfg.tol, "bracket tolerance");
        sub->add_option("--output", output, "write machine output to this file");
        return sub;
    };

    add_common(app.add_subcommand("classify", "scale membership and energy means"));
    add_common(app.add_subcommand("norms", "certified scale-norm brackets"));

    auto* c_evolve =
        add_common(app.add_subcommand("evolve", "sample the evolved profile to CSV"));
    c_evolve->add_option("--time", cfg.time, "evolution time");
    c_evolve->add_option("--points", cfg.points, "grid resolution (default 1024)");
    c_evolve->add_option("--n-max", cfg.n_max, "synthesis truncation index");
    c_evolve->add_option("--grid-lo", cfg.grid_lo, "grid start");
    c_evolve->add_option("--grid-hi", cfg.grid_hi, "grid end");

    auto* c_weak = add_common(
        app.add_subcommand("weak-check", "per-mode phase equation residual"));
    c_weak->add_option("--mode", cfg.mode, "mode index")->required();
    c_weak->add_option("--time", cfg.time, "evaluation time");
    c_weak->add_option("--step", cfg.step, "difference step h");

    auto* c_strong = add_common(
        app.add_subcommand("strong-check", "difference-quotient convergence verdict"));
    c_strong->add_option("--time", cfg.time, "evaluation time");
    c_strong->add_option("--steps", steps_text,
                         "comma-separated decreasing h ladder (default built in)");

    auto* c_ext = add_common(
        app.add_subcommand("extension", "closing-operator mass and uniform bound"));
    c_ext->add_option("--multiplier", cfg.multiplier,
                      "phase multiplier: zero, sine, clamp, table")
        ->check(CLI::IsMember({"zero", "sine", "clamp", "table"}));
    c_ext->add_option("--alpha", cfg.alpha, "sine amplitude");
    c_ext->add_option("--cap", cfg.cap, "clamp cap");
    c_ext->add_option("--pieces", cfg.pieces, "table pieces as lo:hi=value,...");
    c_ext->add_option("--time", cfg.time, "evaluation time");

    auto* c_traj = add_common(
        app.add_subcommand("trajectories", "Bohmian or Nelson path ensembles to CSV"));
    c_traj->add_option("--kind", cfg.kind, "bohmian or nelson")
        ->check(CLI::IsMember({"bohmian", "nelson"}));
    c_traj->add_option("--paths", cfg.paths, "ensemble size");
    c_traj->add_option("--t-span", cfg.t_span, "total integration time");
    c_traj->add_option("--dt", cfg.dt, "step size");
    c_traj->add_option("--seed", cfg.seed, "ensemble seed");

    auto* c_fractal = add_common(
        app.add_subcommand("fractal", "box-count dimension of the sampled profile"));
    c_fractal->add_option("--time", cfg.time, "evaluation time");
    c_fractal->add_option("--points", cfg.points, "grid resolution (default 16384)");
    c_fractal->add_option("--n-max", cfg.n_max, "synthesis truncation index");
    c_fractal->add_option("--grid-lo", cfg.grid_lo, "grid start");
    c_fractal->add_option("--grid-hi", cfg.grid_hi, "grid end");
    c_fractal->add_option("--scales", scales_text,
                          "comma-separated box sizes (default derived from grid)");

    auto* c_replay = app.add_subcommand(
        "replay", "re-run the config embedded in a previous output");
    c_replay->add_option("file", replay_file, "output file with an embedded config")
        ->required();
    c_replay->add_option("--output", output, "write the replayed output here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (cfg.command == "replay") {
            execute(read_embedded_config(replay_file), output, std::cerr);
            return 0;
        }
        if (!window_text.empty()) {
            const std::vector<std::string> parts = split_list(window_text, ':');
            if (parts.size() != 2)
                throw std::invalid_argument("window needs the form a:b");
            cfg.window_lo = parse_double(parts[0], "window start");
            cfg.window_hi = parse_double(parts[1], "window end");
        }
        if (!steps_text.empty()) cfg.steps = parse_number_list(steps_text, "step");
        if (!scales_text.empty()) cfg.scales = parse_number_list(scales_text, "scale");
        execute(cfg, output, std::cerr);
        return 0;
    } catch (const NotNormalizable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainRequired& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotInExtensionFamily& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NodeProximity& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace schrscale::cli
