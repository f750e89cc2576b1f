#include "lvgraph/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "lvgraph/calculus.hpp"
#include "lvgraph/error.hpp"
#include "lvgraph/random.hpp"

namespace lvg {

DiagnosticsRecord record(const Domain& d, const LVParams& p, const std::optional<Equilibrium>& eq,
                         const State& state) {
    const auto& g = d.graph();
    require_domain(g, state.prey, "record (prey)");
    require_domain(g, state.predator, "record (predator)");

    DiagnosticsRecord rec;
    rec.t = state.time;
    rec.prey_min = state.prey.min();
    rec.prey_max = state.prey.max();
    rec.pred_min = state.predator.min();
    rec.pred_max = state.predator.max();
    if (eq) {
        rec.F_prey = f_functional(g, state.prey, eq->e);
        rec.F_pred = f_functional(g, state.predator, eq->g);
        if (rec.prey_min > 0.0 && rec.pred_min > 0.0)
            rec.L = lyapunov_functional(g, p, *eq, state.prey, state.predator);
    }
    if (const auto* sub = d.subgraph())
        rec.neumann_residual =
            std::max(max_normal_derivative(*sub, state.prey), max_normal_derivative(*sub, state.predator));
    return rec;
}

// ---------------------------------------------------------------------------

TrajectoryMonitor::TrajectoryMonitor(const Domain& d, const LVParams& p, std::optional<Equilibrium> eq,
                                     MonitorOptions opts)
    : domain_(&d), params_(p), eq_(eq), opts_(opts) {}

void TrajectoryMonitor::fail(std::string check, double t, std::string message) {
    if (opts_.fail_fast) throw InvariantViolation(check + " violated at t=" + format_double(t) + ": " + message);
    violations_.push_back({std::move(check), t, std::move(message)});
}

void TrajectoryMonitor::observe(const State& s) {
    const auto& g = domain_->graph();
    DiagnosticsRecord rec = record(*domain_, params_, eq_, s);

    // Invariant box [0, M_prey] x [0, M_pred].
    struct Worst {
        double excess = -1e300;
        std::size_t vertex = 0;
        const char* what = "";
    } worst;
    for (std::size_t x = 0; x < g.size(); ++x) {
        const std::pair<double, const char*> candidates[] = {{s.prey[x] - opts_.box.prey, "prey above M_prey"},
                                                             {-s.prey[x], "prey below 0"},
                                                             {s.predator[x] - opts_.box.pred, "predator above M_pred"},
                                                             {-s.predator[x], "predator below 0"}};
        for (auto [excess, what] : candidates)
            if (excess > worst.excess) worst = {excess, x, what};
    }
    worst_region_ = std::max(worst_region_, worst.excess);
    if (worst.excess > opts_.region_slack) {
        std::ostringstream msg;
        msg << worst.what << " at vertex '" << g.id(worst.vertex) << "' by " << format_double(worst.excess)
            << " (M_prey=" << format_double(opts_.box.prey) << ", M_pred=" << format_double(opts_.box.pred) << ")";
        fail("invariant-region", s.time, msg.str());
    }

    if (opts_.positivity_armed && s.time > 0.0) {
        const double lo = std::min(rec.prey_min, rec.pred_min);
        min_positive_ = std::min(min_positive_, lo);
        if (!(lo > 0.0)) fail("positivity", s.time, "minimum field value " + format_double(lo) + " is not positive");
    }

    if (!records_.empty() && records_.back().L && rec.L) {
        const double prev = *records_.back().L;
        const double increase = (*rec.L - prev) / (1.0 + std::abs(prev));
        worst_lyapunov_ = std::max(worst_lyapunov_, increase);
        if (increase > opts_.lyapunov_tol)
            fail("lyapunov", s.time,
                 "L rose from " + format_double(prev) + " to " + format_double(*rec.L) + " since t=" +
                     format_double(records_.back().t));
    }

    if (rec.neumann_residual && s.time > 0.0) {
        const double sup = std::max({std::abs(rec.prey_min), std::abs(rec.prey_max), std::abs(rec.pred_min),
                                     std::abs(rec.pred_max)});
        const double normalised = *rec.neumann_residual / (1.0 + sup);
        worst_neumann_ = std::max(worst_neumann_, normalised);
        if (normalised > opts_.neumann_tol)
            fail("neumann-residual", s.time, "boundary flux " + format_double(*rec.neumann_residual));
    }

    records_.push_back(std::move(rec));
}

TailDecay f_tail_decay(const std::vector<DiagnosticsRecord>& records, bool prey, double tol) {
    TailDecay out{-1e300, 0};
    const std::size_t start = records.size() / 10;
    for (std::size_t k = start; k + 1 < records.size(); ++k) {
        const auto& a = prey ? records[k].F_prey : records[k].F_pred;
        const auto& b = prey ? records[k + 1].F_prey : records[k + 1].F_pred;
        if (!a || !b) continue;
        const double excess = *b - *a - tol * (1.0 + *a);
        if (excess > out.worst_excess) out = {excess, k + 1};
    }
    return out;
}

// ---------------------------------------------------------------------------

bool VerificationReport::all_pass() const { return count(CheckStatus::fail) == 0; }

std::size_t VerificationReport::count(CheckStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; }));
}

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void write_report(std::ostream& out, const VerificationReport& report) {
    for (const auto& c : report.checks) {
        const char* status = c.status == CheckStatus::pass ? "PASS" : c.status == CheckStatus::fail ? "FAIL" : "SKIP";
        out << status << "  " << c.name << "  residual=" << format_double(c.residual)
            << "  tolerance=" << format_double(c.tolerance);
        if (!c.note.empty()) out << "  note=\"" << c.note << '"';
        if (!c.witness.empty()) out << "\n      witness: " << c.witness;
        out << '\n';
    }
    out << "summary: " << report.checks.size() << " checks, " << report.count(CheckStatus::pass) << " passed, "
        << report.count(CheckStatus::fail) << " failed, " << report.count(CheckStatus::skip) << " skipped\n";
}

// ---------------------------------------------------------------------------
// Identity suite

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kEquilibriumTol = 1e-14;
constexpr std::size_t kDissipationPointsPerTrial = 100;
constexpr std::size_t kEquilibriumDrawsPerTrial = 10;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t family, std::size_t trial) {
    return splitmix64(splitmix64(seed) ^ splitmix64(family * 0x100000001b3ULL + trial));
}

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string describe(const LVParams& p) {
    return "d1=" + g17(p.d1) + " d2=" + g17(p.d2) + " a1=" + g17(p.a1) + " a2=" + g17(p.a2) + " b1=" + g17(p.b1) +
           " b2=" + g17(p.b2) + " c1=" + g17(p.c1) + " c2=" + g17(p.c2);
}

LVParams random_coexisting_params(Rng& rng) {
    for (;;) {
        LVParams p{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                   rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
        if (coexistence_holds(p)) return p;
    }
}

// Δu with the first stored edge entering with negated weight (fault injection).
double corrupted_laplacian_at(const WeightedGraph& g, const VertexField& u, std::size_t x) {
    const Edge& bad = g.edges().front();
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) {
        const bool is_bad = (x == bad.a && n.index == bad.b) || (x == bad.b && n.index == bad.a);
        sum += (is_bad ? -n.weight : n.weight) * (u[n.index] - u[x]);
    }
    return sum / g.measure(x);
}

// |∫vΔu + ∫Γ(u,v)| / (1 + |∫vΔu|), with the two sides evaluated separately.
struct GreenSides {
    double lhs;
    double rhs;
    double relative() const { return std::abs(lhs + rhs) / (1.0 + std::abs(lhs)); }
};

GreenSides green_sides(const WeightedGraph& g, const VertexField& u, const VertexField& v, bool corrupt) {
    const VertexField lap = corrupt ? [&] {
        VertexField out(g.size(), 0.0);
        for (std::size_t x = 0; x < g.size(); ++x) out[x] = corrupted_laplacian_at(g, u, x);
        return out;
    }()
                                    : laplacian(g, u);
    VertexField v_lap(g.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) v_lap[x] = v[x] * lap[x];
    return {integrate(g, v_lap), integrate(g, gradient_form(g, u, v))};
}

struct Worst {
    double residual = 0.0;
    std::string witness;
    void offer(double r, const std::function<std::string()>& make_witness) {
        if (r > residual || witness.empty()) {
            residual = r;
            witness = make_witness();
        }
    }
};

CheckResult finish(std::string name, const Worst& w, double tol, std::string note) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = w.residual;
    c.tolerance = tol;
    c.status = w.residual <= tol ? CheckStatus::pass : CheckStatus::fail;
    if (c.status == CheckStatus::fail) c.witness = w.witness;
    c.note = std::move(note);
    return c;
}

std::string graph_witness(std::uint64_t seed, std::size_t trial, const WeightedGraph& g, double residual) {
    return "seed=" + std::to_string(seed) + " trial=" + std::to_string(trial) + " n=" + std::to_string(g.size()) +
           " edges=" + std::to_string(g.edges().size()) + " relative_residual=" + g17(residual);
}

}  // namespace

const std::vector<std::string>& identity_families() {
    static const std::vector<std::string> families{"green-identity",          "green-identity-closure",
                                                   "gradient-form-symmetry",  "gradient-form-bilinearity",
                                                   "dissipation-identity",    "equilibrium"};
    return families;
}

VerificationReport verify_identities(std::uint64_t seed, std::size_t trials, const IdentityOptions& opts) {
    if (trials == 0) throw PreconditionError("verify_identities: trials must be at least 1");
    auto wanted = [&](const std::string& family) {
        return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), family) != opts.only.end();
    };
    const auto& families = identity_families();
    VerificationReport report;

    // Families 0-3 share one random graph per trial.
    if (wanted(families[0]) || wanted(families[1]) || wanted(families[2]) || wanted(families[3])) {
        Worst green, closure, symmetry, bilinear;
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(trial_seed(seed, 0, t));
            const std::size_t n = 2 + rng.index(49);
            const WeightedGraph g = random_connected_graph(rng, n);
            const VertexField u = random_field(rng, n, -1.0, 1.0);
            const VertexField v = random_field(rng, n, -1.0, 1.0);

            if (wanted(families[0])) {
                const double r = green_sides(g, u, v, opts.corrupt_laplacian).relative();
                green.offer(r, [&] { return graph_witness(seed, t, g, r); });
            }
            if (wanted(families[1])) {
                const auto interior = random_connected_interior(rng, g);
                const BoundedSubgraph s = induce_bounded_subgraph(g, interior);
                const auto& c = s.closure();
                const VertexField uc = random_field(rng, c.size(), -1.0, 1.0);
                const VertexField vc = random_field(rng, c.size(), -1.0, 1.0);
                const double r = green_sides(c, uc, vc, opts.corrupt_laplacian).relative();
                closure.offer(r, [&] {
                    return graph_witness(seed, t, g, r) + " interior=" + std::to_string(s.interior().size()) +
                           " boundary=" + std::to_string(s.boundary().size());
                });
            }
            if (wanted(families[2]) || wanted(families[3])) {
                const VertexField w = random_field(rng, n, -1.0, 1.0);
                const double alpha = rng.uniform(-2.0, 2.0);
                const double beta = rng.uniform(-2.0, 2.0);
                VertexField combo(n, 0.0);
                for (std::size_t x = 0; x < n; ++x) combo[x] = alpha * u[x] + beta * w[x];
                double sym = 0.0;
                double lin = 0.0;
                std::size_t lin_at = 0;
                for (std::size_t x = 0; x < n; ++x) {
                    const double uv = gradient_form(g, u, v, x);
                    const double vu = gradient_form(g, v, u, x);
                    sym = std::max(sym, std::abs(uv - vu) / (1.0 + std::abs(uv)));
                    const double lhs = gradient_form(g, combo, v, x);
                    const double rhs = alpha * uv + beta * gradient_form(g, w, v, x);
                    // Cauchy-Schwarz bound on every term of the sum.
                    const double scale = std::abs(alpha) * gradient_length(g, u, x) * gradient_length(g, v, x) +
                                         std::abs(beta) * gradient_length(g, w, x) * gradient_length(g, v, x);
                    const double rel = std::abs(lhs - rhs) / std::max(scale, 1e-300);
                    if (rel > lin) {
                        lin = rel;
                        lin_at = x;
                    }
                }
                symmetry.offer(sym, [&] { return graph_witness(seed, t, g, sym); });
                bilinear.offer(lin, [&] {
                    return graph_witness(seed, t, g, lin) + " vertex=" + g.id(lin_at) + " alpha=" + g17(alpha) +
                           " beta=" + g17(beta);
                });
            }
        }
        const std::string trials_note = std::to_string(trials) + " random connected graphs, n in [2,50]";
        if (wanted(families[0])) report.checks.push_back(finish(families[0], green, kIdentityTol, trials_note));
        if (wanted(families[1]))
            report.checks.push_back(finish(families[1], closure, kIdentityTol, trials_note + ", random interiors"));
        if (wanted(families[2])) report.checks.push_back(finish(families[2], symmetry, kIdentityTol, trials_note));
        if (wanted(families[3])) report.checks.push_back(finish(families[3], bilinear, kIdentityTol, trials_note));
    }

    if (wanted(families[4])) {
        Worst worst;
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(trial_seed(seed, 4, t));
            for (std::size_t i = 0; i < kDissipationPointsPerTrial; ++i) {
                const LVParams p = random_coexisting_params(rng);
                const Equilibrium eq = equilibrium(p);
                const double u = rng.uniform_left_open(0.0, 5.0);
                const double v = rng.uniform_left_open(0.0, 5.0);
                const double r = std::abs(dissipation_identity_residual(p, eq, u, v)) / (u * u + v * v + 1.0);
                worst.offer(r, [&] {
                    return "seed=" + std::to_string(seed) + " trial=" + std::to_string(t) + " point=" +
                           std::to_string(i) + " " + describe(p) + " u=" + g17(u) + " v=" + g17(v);
                });
            }
        }
        report.checks.push_back(finish(families[4], worst, kIdentityTol,
                                       std::to_string(trials * kDissipationPointsPerTrial) + " random points"));
    }

    if (wanted(families[5])) {
        Worst worst;
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(trial_seed(seed, 5, t));
            for (std::size_t i = 0; i < kEquilibriumDrawsPerTrial; ++i) {
                const LVParams p = random_coexisting_params(rng);
                const Equilibrium eq = equilibrium(p);
                const double r1 = std::abs(p.a1 - p.b1 * eq.e - p.c1 * eq.g);
                const double r2 = std::abs(p.a2 + p.b2 * eq.e - p.c2 * eq.g);
                const double r = std::max(r1, r2) / std::max(p.a1, p.a2);
                worst.offer(r, [&] {
                    return "seed=" + std::to_string(seed) + " trial=" + std::to_string(t) + " draw=" +
                           std::to_string(i) + " " + describe(p);
                });
            }
        }
        report.checks.push_back(finish(families[5], worst, kEquilibriumTol,
                                       std::to_string(trials * kEquilibriumDrawsPerTrial) + " parameter draws"));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Theorem scenarios

namespace {

LVParams baseline_params() {
    LVParams p;
    p.a1 = 2.0;
    return p;
}

SolverConfig baseline_solver() {
    SolverConfig cfg;
    cfg.method = Method::rk4;
    cfg.t_end = 500.0;
    cfg.convergence_tol = 1e-6;
    cfg.record_every = 1;
    return cfg;
}

}  // namespace

std::vector<Scenario> bundled_scenarios(std::uint64_t seed) {
    const LVParams p = baseline_params();
    const SolverConfig cfg = baseline_solver();
    std::vector<Scenario> out;

    auto full = [&](std::string name, WeightedGraph g, VertexField u0, VertexField v0) {
        out.push_back({std::move(name), Domain(std::move(g)), p, std::move(u0), std::move(v0), cfg});
    };
    auto random_ic = [&](std::size_t which, std::size_t n) {
        Rng rng(trial_seed(seed, 100 + which, 0));
        VertexField u(n, 0.0), v(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) u[i] = rng.uniform_left_open(0.0, 3.0);
        for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform_left_open(0.0, 3.0);
        return std::pair{u, v};
    };

    full("cycle10-baseline", generate(Topology::cycle, 10), VertexField(10, 1.0), VertexField(10, 1.0));
    {
        auto [u, v] = random_ic(0, 5);
        full("path5", generate(Topology::path, 5), u, v);
    }
    {
        auto [u, v] = random_ic(1, 10);
        full("cycle10", generate(Topology::cycle, 10), u, v);
    }
    {
        auto [u, v] = random_ic(2, 5);
        full("complete5", generate(Topology::complete, 5), u, v);
    }
    {
        auto [u, v] = random_ic(3, 9);
        full("grid3x3", generate_grid(3, 3), u, v);
    }
    {
        // Prey absent at both ends, predator absent in the middle.
        auto [u, v] = random_ic(4, 5);
        u[0] = 0.0;
        u[4] = 0.0;
        v[2] = 0.0;
        full("path5-sparse", generate(Topology::path, 5), u, v);
    }
    {
        auto [u, v] = random_ic(5, 9);
        for (std::size_t i : {0u, 4u, 8u}) u[i] = 0.0;
        for (std::size_t i : {2u, 6u}) v[i] = 0.0;
        full("grid3x3-sparse", generate_grid(3, 3), u, v);
    }
    {
        SolverConfig still = cfg;
        still.t_end = 10.0;
        out.push_back({"cycle10-extinct", Domain(generate(Topology::cycle, 10)), p, VertexField(10, 0.0),
                       VertexField(10, 0.0), still});
    }

    const std::vector<std::string> p3_interior{"1", "2"};
    out.push_back({"p3-neumann", Domain(induce_bounded_subgraph(generate(Topology::path, 3), p3_interior)), p,
                   VertexField(3, 1.0), VertexField(3, 1.0), cfg});
    {
        auto [u, v] = random_ic(6, 3);
        out.push_back({"p3-neumann-random", Domain(induce_bounded_subgraph(generate(Topology::path, 3), p3_interior)),
                       p, u, v, cfg});
    }
    {
        // 2x2 block in the middle of a 4x4 grid (row-major ids 1..16).
        const std::vector<std::string> interior{"6", "7", "10", "11"};
        BoundedSubgraph s = induce_bounded_subgraph(generate_grid(4, 4), interior);
        auto [u, v] = random_ic(7, s.closure().size());
        out.push_back({"grid4x4-neumann", Domain(std::move(s)), p, u, v, cfg});
    }
    return out;
}

ScenarioOutcome run_scenario(const Scenario& sc) {
    const auto& g = sc.domain.graph();
    const LVParams& p = sc.params;
    const State s0 = initial_state(sc.domain, sc.u0, sc.v0);
    const bool nontrivial = s0.prey.max() > 0.0 && s0.predator.max() > 0.0;
    const bool hypotheses = nontrivial && coexistence_holds(p);
    const std::optional<Equilibrium> eq = coexistence_holds(p) ? std::optional(equilibrium(p)) : std::nullopt;

    SolverConfig cfg = sc.solver;
    if (!hypotheses) cfg.convergence_tol = 0.0;

    MonitorOptions mopts;
    mopts.box = bounds(p, s0.prey, s0.predator);
    mopts.positivity_armed = nontrivial;
    TrajectoryMonitor monitor(sc.domain, p, eq, mopts);

    ScenarioOutcome out;
    out.result = simulate(sc.domain, p, sc.u0, sc.v0, cfg, [&](const State& s, std::size_t) { monitor.observe(s); });
    out.records = monitor.records();
    auto& checks = out.report.checks;
    const std::string prefix = sc.name + "/";

    auto first_violation = [&](std::string_view check) -> std::string {
        for (const auto& v : monitor.violations())
            if (v.check == check) return "scenario=" + sc.name + " t=" + g17(v.t) + " " + v.message;
        return {};
    };
    auto add = [&](std::string check, bool pass, double residual, double tol, std::string witness,
                   std::string note = {}) {
        CheckResult c{prefix + check, pass ? CheckStatus::pass : CheckStatus::fail, residual, tol, {}, std::move(note)};
        if (!pass) c.witness = witness.empty() ? "scenario=" + sc.name : std::move(witness);
        checks.push_back(std::move(c));
    };
    auto skip = [&](std::string check, std::string why) {
        checks.push_back({prefix + check, CheckStatus::skip, 0.0, 0.0, {}, std::move(why)});
    };

    if (out.result.reason == StopReason::failure)
        add("integration", false, 0.0, 0.0, "scenario=" + sc.name + " " + out.result.failure);

    add("invariant-region", monitor.worst_region_excess() <= mopts.region_slack,
        std::max(0.0, monitor.worst_region_excess()), mopts.region_slack, first_violation("invariant-region"));

    if (mopts.positivity_armed && out.records.size() > 1)
        add("positivity", monitor.min_positive_value() > 0.0, monitor.min_positive_value(), 0.0,
            first_violation("positivity"), "minimum field value after t=0 must exceed the tolerance");
    else
        skip("positivity", "initial data identically zero in some species");

    const auto with_l = std::count_if(out.records.begin(), out.records.end(),
                                      [](const DiagnosticsRecord& r) { return r.L.has_value(); });
    if (with_l >= 2)
        add("lyapunov", monitor.worst_lyapunov_increase() <= mopts.lyapunov_tol,
            std::max(0.0, monitor.worst_lyapunov_increase()), mopts.lyapunov_tol, first_violation("lyapunov"),
            "relative increase of L between consecutive records");
    else
        skip("lyapunov", "fewer than two strictly positive records");

    if (sc.domain.neumann())
        add("neumann-residual", monitor.worst_neumann_residual() <= mopts.neumann_tol,
            monitor.worst_neumann_residual(), mopts.neumann_tol, first_violation("neumann-residual"),
            "max boundary flux / (1 + sup|field|) after t=0");

    if (!hypotheses) {
        skip("convergence", "coexistence or nontrivial initial data missing");
        return out;
    }

    const double distance = distance_to_equilibrium(out.result.final_state, *eq);
    const bool converged = out.result.reason == StopReason::converged;
    std::string ttt = out.result.time_to_tolerance ? "time to tolerance " + g17(*out.result.time_to_tolerance)
                                                   : "not converged by t=" + g17(cfg.t_end);
    add("convergence", converged, distance, cfg.convergence_tol,
        "scenario=" + sc.name + " final t=" + g17(out.result.final_state.time) + " distance=" + g17(distance),
        ttt);
    if (!converged) return out;

    for (bool prey : {true, false}) {
        const auto tail = f_tail_decay(out.records, prey);
        const std::string check = prey ? "f-decay-prey" : "f-decay-pred";
        const double final_f = prey ? out.records.back().F_prey.value_or(0.0) : out.records.back().F_pred.value_or(0.0);
        // F must reach the level implied by the sup-norm stopping test.
        const double level = cfg.convergence_tol * cfg.convergence_tol * g.total_measure();
        add(check, final_f <= level, final_f, level,
            "scenario=" + sc.name + " final F=" + g17(final_f),
            "tail monotonicity excess " + g17(std::max(0.0, tail.worst_excess)) + " at record " +
                std::to_string(tail.at));
    }

    // Steady-state residual of the elliptic system at the final state.
    const auto& fs = out.result.final_state;
    const auto* sub = sc.domain.subgraph();
    double worst = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (sub && !sub->is_interior(x)) continue;
        auto [ru, rv] = reaction(p, fs.prey[x], fs.predator[x]);
        worst = std::max(worst, std::abs(p.d1 * laplacian_at(g, fs.prey, x) + ru));
        worst = std::max(worst, std::abs(p.d2 * laplacian_at(g, fs.predator, x) + rv));
    }
    add("steady-state-residual", worst <= 10.0 * cfg.convergence_tol, worst, 10.0 * cfg.convergence_tol,
        "scenario=" + sc.name + " residual=" + g17(worst));
    return out;
}

VerificationReport verify_theorems(const std::vector<Scenario>& scenarios, unsigned jobs) {
    std::vector<VerificationReport> parts(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) parts[i] = run_scenario(scenarios[i]).report;
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    VerificationReport report;
    for (const auto& part : parts) report.append(part);
    return report;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

std::string cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    return out;
}

std::optional<double> parse_cell(std::string_view s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(line, "invalid number '" + std::string(s) + "'");
    return v;
}

}  // namespace

void write_timeseries(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
    if (records.empty()) throw PreconditionError("write_timeseries: no records");
    out << "t,L,F_prey,F_pred,prey_min,prey_max,pred_min,pred_max,neumann_residual\n";
    for (const auto& r : records) {
        out << format_double(r.t) << ',' << cell(r.L) << ',' << cell(r.F_prey) << ',' << cell(r.F_pred) << ','
            << format_double(r.prey_min) << ',' << format_double(r.prey_max) << ',' << format_double(r.pred_min)
            << ',' << format_double(r.pred_max) << ',' << cell(r.neumann_residual) << '\n';
    }
}

void write_timeseries(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
    auto out = open_output(path);
    write_timeseries(out, records);
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

std::vector<DiagnosticsRecord> parse_timeseries(std::string_view csv) {
    std::vector<DiagnosticsRecord> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto end = csv.find('\n', pos);
        if (end == std::string_view::npos) end = csv.size();
        auto line = csv.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line_no == 1 || line.empty()) continue;

        std::vector<std::string_view> cells;
        std::size_t start = 0;
        for (;;) {
            auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cells.size() != 9) throw ParseError(line_no, "expected 9 columns");
        auto required = [&](std::string_view s) {
            auto v = parse_cell(s, line_no);
            if (!v) throw ParseError(line_no, "missing required value");
            return *v;
        };
        DiagnosticsRecord r;
        r.t = required(cells[0]);
        r.L = parse_cell(cells[1], line_no);
        r.F_prey = parse_cell(cells[2], line_no);
        r.F_pred = parse_cell(cells[3], line_no);
        r.prey_min = required(cells[4]);
        r.prey_max = required(cells[5]);
        r.pred_min = required(cells[6]);
        r.pred_max = required(cells[7]);
        r.neumann_residual = parse_cell(cells[8], line_no);
        out.push_back(r);
    }
    return out;
}

void write_states(std::ostream& out, const WeightedGraph& domain, const std::vector<State>& trajectory) {
    if (trajectory.empty()) throw PreconditionError("write_states: empty trajectory");
    out << "t,vertex,prey,pred\n";
    for (const auto& s : trajectory) {
        const std::string t = format_double(s.time);
        for (std::size_t x = 0; x < domain.size(); ++x)
            out << t << ',' << domain.id(x) << ',' << format_double(s.prey[x]) << ','
                << format_double(s.predator[x]) << '\n';
    }
}

void write_states(const std::string& path, const WeightedGraph& domain, const std::vector<State>& trajectory) {
    auto out = open_output(path);
    write_states(out, domain, trajectory);
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

}  // namespace lvg
