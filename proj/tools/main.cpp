#include <iostream>

#include <CLI11.hpp>

#include "lvgraph/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Prey-predator reaction-diffusion on weighted graphs"};
    app.require_subcommand(1);

    lvg::cli::Options opts;
    std::string output_dir;
    std::size_t record_every = 0;
    app.add_option("--output-dir", output_dir, "Directory for relative output paths");
    app.add_option("--record-every", record_every, "Steps between diagnostics records (overrides config)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--fail-fast", opts.fail_fast, "Abort at the first invariant violation");
    app.add_option("--jobs", opts.jobs, "Worker threads for sweep/verify (default: all cores)");

    std::string config;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation from a JSON config");
    simulate->add_option("config", config, "Config file")->required();

    std::vector<double> params;
    auto* equilibrium = app.add_subcommand("equilibrium", "Print the constant equilibrium for d1 d2 a1 a2 b1 b2 c1 c2");
    equilibrium->add_option("params", params, "d1 d2 a1 a2 b1 b2 c1 c2")->required()->expected(8);

    std::uint64_t seed = 1;
    std::size_t trials = 100;
    std::vector<std::string> only;
    auto* verify = app.add_subcommand("verify", "Run identity and theorem verification suites");
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--trials", trials, "Random trials per identity family");
    verify->add_option("--only", only, "Restrict to these check families or scenarios");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid from a JSON config");
    sweep->add_option("config", config, "Config file with a sweep grid")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : lvg::cli::invalid_input;
    }
    if (!output_dir.empty()) opts.output_dir = output_dir;
    if (record_every > 0) opts.record_every = record_every;

    if (*simulate) return lvg::cli::cmd_simulate(config, opts, std::cout, std::cerr);
    if (*equilibrium) return lvg::cli::cmd_equilibrium(params, std::cout, std::cerr);
    if (*verify) return lvg::cli::cmd_verify(seed, trials, only, opts, std::cout, std::cerr);
    if (*sweep) return lvg::cli::cmd_sweep(config, opts, std::cout, std::cerr);
    return lvg::cli::invalid_input;
}
