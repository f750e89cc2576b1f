#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lvgraph/model.hpp"
#include "lvgraph/solver.hpp"

namespace lvg::cli {

enum ExitCode : int { ok = 0, invalid_input = 1, invariant_violation = 2, not_converged = 3 };

/// Initial data for one species.
struct InitialCondition {
    enum class Kind { constant, file, uniform };
    Kind kind = Kind::constant;
    double value = 0.0;                 ///< constant
    std::filesystem::path path;         ///< file: lines "<vertex> <value>"
    double lo = 0.0, hi = 1.0;          ///< uniform in (lo, hi]
    std::optional<std::uint64_t> seed;  ///< required for uniform
};

struct GraphSource {
    std::optional<std::filesystem::path> file;
    std::string generator;  ///< path|cycle|complete|star|grid
    std::size_t n = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double weight = 1.0;
    double measure = 1.0;
};

/// Parsed configuration file. Relative input paths are resolved against the
/// config file's directory; relative output paths against the output dir.
struct RunConfig {
    GraphSource graph;
    bool neumann = false;
    std::vector<std::string> interior;
    LVParams params;
    InitialCondition prey;
    InitialCondition pred;
    SolverConfig solver;
    std::filesystem::path states_path = "states.csv";
    std::filesystem::path diagnostics_path = "diagnostics.csv";
    std::filesystem::path summary_path = "sweep.csv";
    /// Sweep grid: parameter name -> values. Empty outside sweeps.
    std::map<std::string, std::vector<double>> grid;
};

/// Parses the JSON config. Throws InvalidInput naming the offending field.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Builds the simulation domain named by the config (reads graph files).
Domain build_domain(const RunConfig& cfg);

/// Materialises an initial condition on the domain graph.
VertexField build_initial(const InitialCondition& ic, const WeightedGraph& domain, const char* species);

struct Options {
    std::filesystem::path output_dir;  ///< prefix for relative output paths
    std::optional<std::size_t> record_every;
    bool fail_fast = false;
    unsigned jobs = 0;  ///< 0: hardware concurrency
};

int cmd_simulate(const std::filesystem::path& config, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_equilibrium(const std::vector<double>& values, std::ostream& out, std::ostream& err);
int cmd_verify(std::uint64_t seed, std::size_t trials, const std::vector<std::string>& only, const Options& opts,
               std::ostream& out, std::ostream& err);
int cmd_sweep(const std::filesystem::path& config, const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace lvg::cli
