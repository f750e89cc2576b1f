// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes at its stated tolerance and time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "lvgraph/calculus.hpp"
#include "lvgraph/cli.hpp"
#include "lvgraph/diagnostics.hpp"
#include "lvgraph/model.hpp"
#include "lvgraph/random.hpp"
#include "lvgraph/solver.hpp"

using namespace lvg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body, double time_limit = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit > 0.0 && secs >= time_limit) {
        o.pass = false;
        o.detail += "  (time limit " + format_double(time_limit) + "s exceeded)";
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %-26s %s  time=%.3fs\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

LVParams baseline_params() {
    LVParams p;
    p.a1 = 2;
    return p;
}

LVParams random_coexisting(Rng& rng) {
    for (;;) {
        LVParams p{rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2),
                   rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)};
        if (coexistence_holds(p)) return p;
    }
}

VertexField open_closed_field(Rng& rng, std::size_t n, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform_left_open(0.0, hi);
    return VertexField(std::move(v));
}

double v_laplacian_u(const WeightedGraph& g, const VertexField& u, const VertexField& v) {
    const auto lu = laplacian(g, u);
    double s = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) s += g.measure(x) * v[x] * lu[x];
    return s;
}

// ---------------------------------------------------------------------------
// Trajectory scenarios shared by criteria 5-9

struct Run {
    std::string name;
    Method method;
    bool neumann;
    bool sparse;  // some initial vertices are zero
    SimulationResult result;
    double region_excess = -std::numeric_limits<double>::infinity();
    double min_after_zero = std::numeric_limits<double>::infinity();
    double lyapunov_excess = -std::numeric_limits<double>::infinity();
    double max_flux = 0.0;
    double final_distance = 0.0;
    std::size_t records = 0;
    double seconds = 0.0;
};

Run run(const std::string& name, const Domain& d, const VertexField& u0, const VertexField& v0, Method method, bool sparse) {
    const auto p = baseline_params();
    const auto eq = equilibrium(p);
    const auto s0 = initial_state(d, u0, v0);
    const auto box = bounds(p, s0.prey, s0.predator);

    SolverConfig cfg;
    cfg.method = method;
    cfg.t_end = 500;
    cfg.convergence_tol = 1e-6;
    cfg.record_every = 1;

    Run r{name, method, d.neumann(), sparse, {}};
    std::optional<double> prev_L;
    auto sink = [&](const State& s, std::size_t) {
        ++r.records;
        const auto& g = d.graph();
        for (std::size_t x = 0; x < g.size(); ++x) {
            r.region_excess = std::max({r.region_excess, s.prey[x] - box.prey, -s.prey[x], s.predator[x] - box.pred,
                                        -s.predator[x]});
            if (s.time > 0.0) r.min_after_zero = std::min({r.min_after_zero, s.prey[x], s.predator[x]});
        }
        std::optional<double> L;
        if (s.prey.min() > 0.0 && s.predator.min() > 0.0) L = lyapunov_functional(g, p, eq, s.prey, s.predator);
        if (prev_L && L) r.lyapunov_excess = std::max(r.lyapunov_excess, *L - *prev_L - 1e-10 * (1.0 + std::abs(*prev_L)));
        prev_L = L;
        if (const auto* sub = d.subgraph(); sub && s.time > 0.0)
            r.max_flux = std::max({r.max_flux, max_normal_derivative(*sub, s.prey), max_normal_derivative(*sub, s.predator)});
    };
    const auto t0 = std::chrono::steady_clock::now();
    r.result = simulate(d, p, u0, v0, cfg, sink);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.final_distance = distance_to_equilibrium(r.result.final_state, eq);
    return r;
}

std::vector<Run> run_all() {
    std::vector<Run> runs;
    Rng rng(20240601);
    struct Full {
        const char* name;
        WeightedGraph g;
    };
    const Full full[] = {{"path5", generate(Topology::path, 5)},
                         {"cycle10", generate(Topology::cycle, 10)},
                         {"complete5", generate(Topology::complete, 5)},
                         {"grid3x3", generate_grid(3, 3)}};
    for (const auto& [name, g] : full) {
        const Domain d(g);
        const auto u0 = open_closed_field(rng, g.size(), 3.0);
        const auto v0 = open_closed_field(rng, g.size(), 3.0);
        // Prey vanishes at the end vertices, predator at the middle one.
        auto us = u0.values();
        auto vs = v0.values();
        std::vector<double> uz(us.begin(), us.end()), vz(vs.begin(), vs.end());
        uz.front() = 0.0;
        uz.back() = 0.0;
        vz[g.size() / 2] = 0.0;
        for (auto m : {Method::rk4, Method::euler}) {
            runs.push_back(run(name, d, u0, v0, m, false));
            runs.push_back(run(std::string(name) + "-sparse", d, VertexField(uz), VertexField(vz), m, true));
        }
    }

    const std::vector<std::string> p3_in{"1", "2"};
    const std::vector<std::string> grid_in{"6", "7", "10", "11"};
    const Domain p3(induce_bounded_subgraph(generate(Topology::path, 3), p3_in));
    const Domain g4(induce_bounded_subgraph(generate_grid(4, 4), grid_in));
    for (auto m : {Method::rk4, Method::euler}) {
        runs.push_back(run("p3-neumann", p3, open_closed_field(rng, 3, 3.0), open_closed_field(rng, 3, 3.0), m, false));
        runs.push_back(run("grid4x4-neumann", g4, open_closed_field(rng, g4.graph().size(), 3.0),
                           open_closed_field(rng, g4.graph().size(), 3.0), m, false));
    }
    return runs;
}

std::string label(const Run& r) { return r.name + "/" + std::string(to_string(r.method)); }

// ---------------------------------------------------------------------------

Outcome green_full() {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_connected_graph(rng, 2 + rng.index(49));
        const auto u = random_field(rng, g.size(), -1, 1);
        const auto v = random_field(rng, g.size(), -1, 1);
        const double scaled = std::abs(green_identity_residual(g, u, v)) / (1.0 + std::abs(v_laplacian_u(g, u, v)));
        worst = std::max(worst, scaled);
    }
    return {worst <= 1e-12, "worst |res|/(1+|∫vΔu|)=" + num(worst) + " bound=1e-12 graphs=100"};
}

Outcome green_closure() {
    Rng rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_connected_graph(rng, 2 + rng.index(49));
        const auto s = induce_bounded_subgraph(g, random_connected_interior(rng, g));
        const auto u = random_field(rng, s.closure().size(), -1, 1);
        const auto v = random_field(rng, s.closure().size(), -1, 1);
        const double scaled =
            std::abs(green_identity_residual(s, u, v)) / (1.0 + std::abs(v_laplacian_u(s.closure(), u, v)));
        worst = std::max(worst, scaled);
    }
    return {worst <= 1e-12, "worst |res|/(1+|∫vΔu|)=" + num(worst) + " bound=1e-12 subgraphs=100"};
}

Outcome dissipation() {
    Rng rng(303);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto p = random_coexisting(rng);
        const auto eq = equilibrium(p);
        const double u = rng.uniform_left_open(0, 5), v = rng.uniform_left_open(0, 5);
        worst = std::max(worst, std::abs(dissipation_identity_residual(p, eq, u, v)) / (u * u + v * v + 1.0));
    }
    return {worst <= 1e-12, "worst |res|/(u²+v²+1)=" + num(worst) + " bound=1e-12 points=10000"};
}

Outcome equilibrium_check() {
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_coexisting(rng);
        const auto eq = equilibrium(p);
        const auto [fu, fv] = reaction(p, eq.e, eq.g);
        worst = std::max(worst, std::max(std::abs(fu), std::abs(fv)) / std::max(p.a1, p.a2));
    }
    const auto eq = equilibrium(baseline_params());
    const double exact = std::max(std::abs(eq.e - 0.5), std::abs(eq.g - 1.5));
    return {worst <= 1e-14 && exact <= 1e-15,
            "worst |reaction(e,g)|/max(a1,a2)=" + num(worst) + " bound=1e-14 draws=1000; a1=2 instance: (" +
                format_double(eq.e) + ", " + format_double(eq.g) + ") error=" + num(exact)};
}

Outcome invariant_region(const std::vector<Run>& runs) {
    double worst = -1e300;
    std::string where;
    for (const auto& r : runs) {
        if (r.neumann) continue;
        if (r.region_excess > worst) worst = r.region_excess, where = label(r);
    }
    return {worst <= 1e-9, "worst excess over [0,M]=" + num(worst) + " at " + where + " slack=1e-9"};
}

Outcome positivity(const std::vector<Run>& runs) {
    double lowest = 1e300;
    std::string where;
    std::size_t sparse = 0;
    for (const auto& r : runs) {
        if (r.neumann) continue;
        sparse += r.sparse;
        if (r.min_after_zero < lowest) lowest = r.min_after_zero, where = label(r);
    }
    return {lowest > 0.0 && sparse > 0, "min value after t=0: " + num(lowest) + " at " + where + " (" +
                                            std::to_string(sparse) + " runs with zero vertices)"};
}

Outcome lyapunov(const std::vector<Run>& runs) {
    double worst = -1e300;
    std::string where;
    for (const auto& r : runs)
        if (r.lyapunov_excess > worst) worst = r.lyapunov_excess, where = label(r);
    // Extra Neumann runs on random weighted subgraphs.
    Rng rng(707);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_connected_graph(rng, 3 + rng.index(20));
        const Domain d(induce_bounded_subgraph(g, random_connected_interior(rng, g)));
        const auto n = d.graph().size();
        const auto r = run("random-neumann-" + std::to_string(trial), d, open_closed_field(rng, n, 3.0),
                           open_closed_field(rng, n, 3.0), trial % 2 ? Method::euler : Method::rk4, false);
        if (r.lyapunov_excess > worst) worst = r.lyapunov_excess, where = label(r);
    }
    return {worst <= 0.0, "worst L(t_k+1)-L(t_k)-1e-10(1+|L|)=" + num(worst) + " at " + where +
                              " (20 extra random subgraphs)"};
}

Outcome convergence(const std::vector<Run>& runs) {
    bool ok = true;
    double slowest = 0.0, worst_time = 0.0, worst_dist = 0.0;
    std::string where;
    for (const auto& r : runs) {
        if (r.neumann) continue;
        const bool converged = r.result.reason == StopReason::converged && r.final_distance <= 1e-6 &&
                               r.result.time_to_tolerance && *r.result.time_to_tolerance < 500.0;
        ok = ok && converged && r.seconds < 10.0;
        worst_dist = std::max(worst_dist, r.final_distance);
        slowest = std::max(slowest, r.seconds);
        const double t = r.result.time_to_tolerance.value_or(1e300);
        if (t > worst_time) worst_time = t, where = label(r);
    }
    return {ok, "latest time to 1e-6: t=" + num(worst_time) + " (" + where + "), max distance " + num(worst_dist) +
                    ", slowest run " + num(slowest) + "s"};
}

Outcome neumann(const std::vector<Run>& runs) {
    bool ok = true;
    double flux = 0.0, dist = 0.0, latest = 0.0;
    for (const auto& r : runs) {
        if (!r.neumann) continue;
        ok = ok && r.result.reason == StopReason::converged && r.final_distance <= 1e-6 && r.max_flux <= 1e-12;
        flux = std::max(flux, r.max_flux);
        dist = std::max(dist, r.final_distance);
        latest = std::max(latest, r.result.time_to_tolerance.value_or(1e300));
    }
    return {ok, "max distance on closure " + num(dist) + " (latest t=" + num(latest) + "), max boundary flux " +
                    num(flux) + " bound=1e-12"};
}

Outcome conservation() {
    Rng rng(505);
    double worst = 0.0;
    auto drift = [&](const Domain& d, const VertexField& u0, double dt) {
        State s{0.0, u0, u0};
        auto mass = [&](const VertexField& u) {
            if (const auto* sub = d.subgraph()) {
                double m = 0.0;
                for (auto x : sub->interior()) m += sub->closure().measure(x) * u[x];
                return m;
            }
            return integrate(d.graph(), u);
        };
        const double m0 = mass(u0);
        for (int k = 0; k < 10000; ++k) s = step(d, LVParams{}, s, dt, Method::rk4, false);
        return std::abs(mass(s.prey) - m0) / m0;
    };
    for (int trial = 0; trial < 4; ++trial) {
        const auto g = random_connected_graph(rng, 5 + rng.index(20));
        const double dt = stable_dt(g, LVParams{}, Bounds{3, 3}, 0.5);
        worst = std::max(worst, drift(Domain(g), open_closed_field(rng, g.size(), 3.0), dt));
        const auto s = induce_bounded_subgraph(g, random_connected_interior(rng, g));
        const auto u0 = enforce_neumann(s, open_closed_field(rng, s.closure().size(), 3.0));
        worst = std::max(worst, drift(Domain(s), u0, dt));
    }
    return {worst <= 1e-10, "worst relative mass drift " + num(worst) + " bound=1e-10 (10^4 RK4 steps, full+neumann)"};
}

Outcome fixed_point() {
    const auto p = baseline_params();
    const auto eq = equilibrium(p);
    const std::vector<std::string> in{"6", "7", "10", "11"};
    const Domain domains[] = {Domain(generate(Topology::cycle, 10)),
                              Domain(induce_bounded_subgraph(generate_grid(4, 4), in))};
    double worst = 0.0;
    for (const auto& d : domains) {
        const auto n = d.graph().size();
        const double dt = stable_dt(d.graph(), p, Bounds{2, 3}, 0.5);
        for (auto m : {Method::rk4, Method::euler}) {
            State s{0.0, VertexField(n, eq.e), VertexField(n, eq.g)};
            for (int k = 0; k < 10000; ++k) s = step(d, p, s, dt, m);
            worst = std::max(worst, distance_to_equilibrium(s, eq));
        }
    }
    return {worst <= 1e-10, "worst sup-norm drift " + num(worst) + " bound=1e-10 (10^4 steps, both modes)"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("lvgraph-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(root);
    struct Cleanup {
        fs::path p;
        ~Cleanup() { fs::remove_all(p); }
    } cleanup{root};

    std::ofstream(root / "grid.json") << R"({
      "graph": {"generator": "grid", "rows": 4, "cols": 4},
      "mode": "neumann", "interior": ["6", "7", "10", "11"],
      "params": {"d1": 1, "d2": 1, "a1": 2, "a2": 1, "b1": 1, "b2": 1, "c1": 1, "c2": 1},
      "initial": {"prey": {"uniform": [0, 3], "seed": 7}, "pred": {"uniform": [0, 3], "seed": 8}},
      "solver": {"t_end": 500, "convergence_tol": 1e-6}
    })";
    std::ofstream(root / "cycle.json") << R"({
      "graph": {"generator": "cycle", "n": 10},
      "params": {"d1": 1, "d2": 1, "a1": 2, "a2": 1, "b1": 1, "b2": 1, "c1": 1, "c2": 1},
      "initial": {"prey": {"uniform": [0, 3], "seed": 1}, "pred": {"uniform": [0, 3], "seed": 2}},
      "solver": {"method": "euler", "t_end": 500, "convergence_tol": 1e-6},
      "sweep": {"c1": [0.5, 1.0, 2.5], "d2": [0.5, 2.0]}
    })";

    auto run_once = [&](const fs::path& out) {
        fs::create_directories(out);
        cli::Options opts;
        opts.output_dir = out;
        opts.jobs = 2;
        std::ostringstream sink, err;
        int codes = 0;
        codes |= cli::cmd_simulate(root / "grid.json", opts, sink, err);
        codes |= cli::cmd_simulate(root / "cycle.json", opts, sink, err) == cli::ok ? 0 : 4;
        codes |= cli::cmd_sweep(root / "cycle.json", opts, sink, err);
        std::ostringstream verify;
        codes |= cli::cmd_verify(9, 10, {}, opts, verify, err);
        std::ofstream(out / "verify.txt") << verify.str();
        return codes;
    };
    const int a = run_once(root / "a");
    const int b = run_once(root / "b");
    std::size_t files = 0;
    bool same = a == 0 && b == 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        ++files;
        same = same && slurp(entry.path()) == slurp(root / "b" / entry.path().filename());
    }
    return {same && files >= 4, std::to_string(files) + " output files compared byte for byte across two runs"};
}

}  // namespace

int main() {
    report(1, "green-identity", green_full, 5.0);
    report(2, "green-identity-closure", green_closure, 5.0);
    report(3, "dissipation-identity", dissipation, 1.0);
    report(4, "equilibrium", equilibrium_check);

    std::vector<Run> runs;
    double full_seconds = 0.0;
    {
        const auto t0 = std::chrono::steady_clock::now();
        runs = run_all();
        full_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    report(5, "invariant-region", [&] {
        auto o = invariant_region(runs);
        o.pass = o.pass && full_seconds < 10.0;
        o.detail += " scenarios-total=" + num(full_seconds) + "s";
        return o;
    });
    report(6, "positivity", [&] { return positivity(runs); });
    report(7, "lyapunov-monotone", [&] { return lyapunov(runs); });
    report(8, "global-convergence", [&] { return convergence(runs); });
    report(9, "neumann-convergence", [&] { return neumann(runs); });
    report(10, "diffusion-conservation", conservation);
    report(11, "equilibrium-fixed-point", fixed_point);
    report(12, "determinism", determinism);

    std::printf("acceptance: %d/12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
