#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "schrscale/spectrum.hpp"
#include "schrscale/state.hpp"

namespace schrscale::cli {

// Everything a run depends on, resolved to concrete values.  Outputs embed
// this record, and replaying it reproduces the run byte for byte; the output
// path itself stays outside so a replay can land anywhere.
struct RunConfig {
    std::string command;

    std::string model = "box";
    double length = SpectrumModel::kDefaultBoxLength;
    std::optional<double> shift;  // requested; factories default per model
    std::string levels;           // table spectra, "n=E,n=E,..."

    std::string state;
    std::optional<double> window_lo;
    std::optional<double> window_hi;
    double tol = StateVector::kNormTol;

    double time = 0.0;                  // evolve, checks, extension, fractal
    long mode = 0;                      // weak-check
    double step = 1e-3;                 // weak-check
    std::vector<double> steps;          // strong-check; empty = default ladder
    long points = 0;  // 0 means pick the per-command default                 // evolve / fractal grid resolution
    std::optional<long> n_max;          // synthesis truncation index
    std::optional<double> grid_lo;
    std::optional<double> grid_hi;
    std::vector<double> scales;         // fractal; empty = derived from grid

    std::string multiplier = "zero";    // extension: zero | sine | clamp | table
    double alpha = 1.0;
    double cap = 1.0;
    std::string pieces;                 // extension table, "lo:hi=v,..."

    std::string kind = "nelson";        // trajectories: bohmian | nelson
    long paths = 1000;
    double t_span = 0.3;
    double dt = 1e-3;
    std::uint64_t seed = 1;
};

// Serialization is lossless for every field the command uses, which is what
// makes embedded configs replayable.
nlohmann::json config_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Executes one resolved run: writes the machine-readable output to
// output_path (empty means stdout for JSON commands) and a one-line summary
// to err.  Throws the module errors; the entry point maps them to exit codes.
void execute(const RunConfig& cfg, const std::string& output_path,
             std::ostream& err);

// Full command-line entry: parse, dispatch, map errors to exit codes
// (0 success, 1 usage, 2 divergence where finiteness is required, 3 I/O).
int main_entry(int argc, char** argv);

} // namespace schrscale::cli
