#include "lvgraph/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lvgraph/diagnostics.hpp"
#include "lvgraph/error.hpp"
#include "lvgraph/random.hpp"

namespace lvg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kParamNames[] = {"d1", "d2", "a1", "a2", "b1", "b2", "c1", "c2"};

double& param_ref(LVParams& p, std::string_view name) {
    if (name == "d1") return p.d1;
    if (name == "d2") return p.d2;
    if (name == "a1") return p.a1;
    if (name == "a2") return p.a2;
    if (name == "b1") return p.b1;
    if (name == "b2") return p.b2;
    if (name == "c1") return p.c1;
    if (name == "c2") return p.c2;
    throw InvalidInput("unknown parameter '" + std::string(name) + "'");
}

void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw InvalidInput(where + (where.empty() ? "" : ".") + key + ": unknown field");
}

const json& object_at(const json& parent, const char* key, const std::string& where) {
    if (!parent.contains(key)) throw InvalidInput(where + key + ": missing");
    const json& j = parent.at(key);
    if (!j.is_object()) throw InvalidInput(where + key + ": expected an object");
    return j;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw InvalidInput(field + ": expected a number");
    return j.get<double>();
}

std::size_t count(const json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw InvalidInput(field + ": expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) throw InvalidInput(field + ": expected a string");
    return j.get<std::string>();
}

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() || base.empty() ? p : base / p; }

InitialCondition parse_initial(const json& j, const std::string& field, const fs::path& base) {
    if (!j.is_object()) throw InvalidInput(field + ": expected an object");
    reject_unknown_keys(j, field, {"constant", "file", "uniform", "seed"});
    InitialCondition ic;
    const int kinds = int(j.contains("constant")) + int(j.contains("file")) + int(j.contains("uniform"));
    if (kinds != 1) throw InvalidInput(field + ": specify exactly one of constant, file, uniform");
    if (j.contains("constant")) {
        ic.kind = InitialCondition::Kind::constant;
        ic.value = number(j.at("constant"), field + ".constant");
        if (!(ic.value >= 0.0)) throw InvalidInput(field + ".constant: must be nonnegative");
    } else if (j.contains("file")) {
        ic.kind = InitialCondition::Kind::file;
        ic.path = resolve(base, text(j.at("file"), field + ".file"));
    } else {
        ic.kind = InitialCondition::Kind::uniform;
        const json& range = j.at("uniform");
        if (!range.is_array() || range.size() != 2) throw InvalidInput(field + ".uniform: expected [lo, hi]");
        ic.lo = number(range[0], field + ".uniform[0]");
        ic.hi = number(range[1], field + ".uniform[1]");
        if (!(ic.lo >= 0.0 && ic.hi > ic.lo)) throw InvalidInput(field + ".uniform: need 0 <= lo < hi");
        if (!j.contains("seed")) throw InvalidInput(field + ".seed: random initial data requires an explicit seed");
        if (!j.at("seed").is_number_unsigned()) throw InvalidInput(field + ".seed: expected a nonnegative integer");
        ic.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("seed") && ic.kind != InitialCondition::Kind::uniform)
        throw InvalidInput(field + ".seed: only meaningful for uniform initial data");
    return ic;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const fs::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw InvalidInput("config: expected a JSON object at top level");
    reject_unknown_keys(root, "", {"graph", "mode", "interior", "params", "initial", "solver", "output", "sweep"});

    RunConfig cfg;

    const json& graph = object_at(root, "graph", "");
    reject_unknown_keys(graph, "graph", {"file", "generator", "n", "rows", "cols", "weight", "measure"});
    if (graph.contains("file") == graph.contains("generator"))
        throw InvalidInput("graph: specify exactly one of file, generator");
    if (graph.contains("file")) {
        cfg.graph.file = resolve(base_dir, text(graph.at("file"), "graph.file"));
    } else {
        cfg.graph.generator = text(graph.at("generator"), "graph.generator");
        auto kind = topology_from_name(cfg.graph.generator);
        if (!kind) throw InvalidInput("graph.generator: unknown topology '" + cfg.graph.generator + "'");
        if (*kind == Topology::grid) {
            if (!graph.contains("rows") || !graph.contains("cols"))
                throw InvalidInput("graph: grid requires rows and cols");
            cfg.graph.rows = count(graph.at("rows"), "graph.rows");
            cfg.graph.cols = count(graph.at("cols"), "graph.cols");
        } else {
            if (!graph.contains("n")) throw InvalidInput("graph.n: missing");
            cfg.graph.n = count(graph.at("n"), "graph.n");
        }
        if (graph.contains("weight")) cfg.graph.weight = number(graph.at("weight"), "graph.weight");
        if (graph.contains("measure")) cfg.graph.measure = number(graph.at("measure"), "graph.measure");
    }

    const std::string mode = root.contains("mode") ? text(root.at("mode"), "mode") : "full";
    if (mode != "full" && mode != "neumann") throw InvalidInput("mode: expected \"full\" or \"neumann\"");
    cfg.neumann = mode == "neumann";
    if (root.contains("interior")) {
        const json& interior = root.at("interior");
        if (!interior.is_array()) throw InvalidInput("interior: expected an array of vertex ids");
        for (const auto& id : interior) {
            if (id.is_string()) cfg.interior.push_back(id.get<std::string>());
            else if (id.is_number_integer()) cfg.interior.push_back(std::to_string(id.get<long long>()));
            else throw InvalidInput("interior: vertex ids must be strings or integers");
        }
        if (!cfg.neumann) throw InvalidInput("interior: only allowed in neumann mode");
    }

    const json& params = object_at(root, "params", "");
    for (const auto& [key, value] : params.items()) param_ref(cfg.params, key) = number(value, "params." + key);
    for (const char* name : kParamNames)
        if (!params.contains(name)) throw InvalidInput(std::string("params.") + name + ": missing");
    try {
        cfg.params.validate();
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("params: ") + e.what());
    }

    const json& initial = object_at(root, "initial", "");
    reject_unknown_keys(initial, "initial", {"prey", "pred"});
    if (!initial.contains("prey") || !initial.contains("pred"))
        throw InvalidInput("initial: both prey and pred are required");
    cfg.prey = parse_initial(initial.at("prey"), "initial.prey", base_dir);
    cfg.pred = parse_initial(initial.at("pred"), "initial.pred", base_dir);

    if (root.contains("solver")) {
        const json& s = object_at(root, "solver", "");
        reject_unknown_keys(s, "solver", {"method", "dt", "t_end", "convergence_tol", "record_every", "safety"});
        if (s.contains("method")) {
            auto m = method_from_name(text(s.at("method"), "solver.method"));
            if (!m) throw InvalidInput("solver.method: expected \"euler\" or \"rk4\"");
            cfg.solver.method = *m;
        }
        if (s.contains("dt")) {
            const json& dt = s.at("dt");
            if (dt.is_string()) {
                if (dt.get<std::string>() != "auto") throw InvalidInput("solver.dt: expected a number or \"auto\"");
            } else {
                cfg.solver.dt = number(dt, "solver.dt");
            }
        }
        if (s.contains("t_end")) cfg.solver.t_end = number(s.at("t_end"), "solver.t_end");
        if (s.contains("convergence_tol"))
            cfg.solver.convergence_tol = number(s.at("convergence_tol"), "solver.convergence_tol");
        if (s.contains("record_every")) cfg.solver.record_every = count(s.at("record_every"), "solver.record_every");
        if (s.contains("safety")) cfg.solver.safety = number(s.at("safety"), "solver.safety");
    }
    cfg.solver.validate();

    if (root.contains("output")) {
        const json& o = object_at(root, "output", "");
        reject_unknown_keys(o, "output", {"states", "diagnostics", "summary"});
        if (o.contains("states")) cfg.states_path = text(o.at("states"), "output.states");
        if (o.contains("diagnostics")) cfg.diagnostics_path = text(o.at("diagnostics"), "output.diagnostics");
        if (o.contains("summary")) cfg.summary_path = text(o.at("summary"), "output.summary");
    }
    const std::set<fs::path> distinct{cfg.states_path.lexically_normal(), cfg.diagnostics_path.lexically_normal(),
                                      cfg.summary_path.lexically_normal()};
    if (distinct.size() != 3) throw InvalidInput("output: states, diagnostics and summary paths must be distinct");

    if (root.contains("sweep")) {
        const json& grid = object_at(root, "sweep", "");
        for (const auto& [key, values] : grid.items()) {
            LVParams probe;
            param_ref(probe, key);  // validates the name
            if (!values.is_array()) throw InvalidInput("sweep." + key + ": expected an array of values");
            std::vector<double> list;
            for (std::size_t i = 0; i < values.size(); ++i)
                list.push_back(number(values[i], "sweep." + key + "[" + std::to_string(i) + "]"));
            cfg.grid[key] = std::move(list);
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_run_config(buf.str(), path.parent_path());
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

Domain build_domain(const RunConfig& cfg) {
    std::vector<std::string> marked;
    std::optional<WeightedGraph> g;
    if (cfg.graph.file) {
        std::ifstream in(*cfg.graph.file);
        if (!in) throw InvalidInput("graph.file: cannot open '" + cfg.graph.file->string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            auto parsed = parse_graph_file(buf.str());
            g = std::move(parsed.graph);
            marked = std::move(parsed.marked_boundary);
        } catch (const InvalidInput& e) {
            throw InvalidInput(cfg.graph.file->string() + ": " + e.what());
        }
    } else {
        const auto kind = *topology_from_name(cfg.graph.generator);
        g = kind == Topology::grid
                ? generate_grid(cfg.graph.rows, cfg.graph.cols, cfg.graph.weight, cfg.graph.measure)
                : generate(kind, cfg.graph.n, cfg.graph.weight, cfg.graph.measure);
    }

    if (!cfg.neumann) return Domain(std::move(*g));

    std::vector<std::string> interior = cfg.interior;
    if (interior.empty() && !marked.empty()) {
        std::set<std::string> marks(marked.begin(), marked.end());
        for (const auto& id : g->ids())
            if (!marks.contains(id)) interior.push_back(id);
    }
    if (interior.empty()) throw InvalidInput("interior: neumann mode requires a nonempty interior vertex list");
    return Domain(induce_bounded_subgraph(*g, interior));
}

VertexField build_initial(const InitialCondition& ic, const WeightedGraph& domain, const char* species) {
    const std::string field = std::string("initial.") + species;
    switch (ic.kind) {
        case InitialCondition::Kind::constant:
            return VertexField(domain.size(), ic.value);
        case InitialCondition::Kind::uniform: {
            Rng rng(*ic.seed);
            VertexField f(domain.size(), 0.0);
            for (std::size_t x = 0; x < domain.size(); ++x) f[x] = rng.uniform_left_open(ic.lo, ic.hi);
            return f;
        }
        case InitialCondition::Kind::file: {
            std::ifstream in(ic.path);
            if (!in) throw InvalidInput(field + ".file: cannot open '" + ic.path.string() + "'");
            std::vector<std::optional<double>> values(domain.size());
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
                std::istringstream ls(line);
                std::string id, extra;
                double value = 0.0;
                if (!(ls >> id)) continue;
                const std::string where = ic.path.string() + ":" + std::to_string(line_no) + ": ";
                if (!(ls >> value) || (ls >> extra)) throw InvalidInput(where + "expected '<vertex> <value>'");
                auto x = domain.index_of(id);
                if (!x) throw InvalidInput(where + "vertex '" + id + "' is not in the domain");
                if (values[*x]) throw InvalidInput(where + "vertex '" + id + "' given twice");
                if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidInput(where + "value must be nonnegative");
                values[*x] = value;
            }
            VertexField f(domain.size(), 0.0);
            for (std::size_t x = 0; x < domain.size(); ++x) {
                if (!values[x])
                    throw InvalidInput(ic.path.string() + ": no value for vertex '" + domain.id(x) + "'");
                f[x] = *values[x];
            }
            return f;
        }
    }
    throw InvalidInput(field + ": unsupported initial condition");
}

// ---------------------------------------------------------------------------

namespace {

fs::path output_path(const Options& opts, const fs::path& p) { return resolve(opts.output_dir, p); }

unsigned job_count(const Options& opts) {
    if (opts.jobs > 0) return opts.jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Prepared {
    RunConfig cfg;
    Domain domain;
    VertexField u0;
    VertexField v0;
};

Prepared prepare(const fs::path& config, const Options& opts) {
    RunConfig cfg = load_run_config(config);
    if (opts.record_every) {
        if (*opts.record_every < 1) throw InvalidInput("--record-every: must be at least 1");
        cfg.solver.record_every = *opts.record_every;
    }
    Domain domain = build_domain(cfg);
    VertexField u0 = build_initial(cfg.prey, domain.graph(), "prey");
    VertexField v0 = build_initial(cfg.pred, domain.graph(), "pred");
    return {std::move(cfg), std::move(domain), std::move(u0), std::move(v0)};
}

void require_convergence_hypotheses(const RunConfig& cfg, const LVParams& p, const VertexField& u0,
                                    const VertexField& v0) {
    if (cfg.solver.convergence_tol <= 0.0) return;
    if (!coexistence_holds(p))
        throw InvalidInput("params: coexistence condition a1/c1 > a2/c2 fails (a1/c1=" +
                           format_double(p.a1 / p.c1) + ", a2/c2=" + format_double(p.a2 / p.c2) +
                           "); convergence stopping needs it");
    if (u0.max() <= 0.0) throw InvalidInput("initial.prey: identically zero; convergence stopping needs u0 != 0");
    if (v0.max() <= 0.0) throw InvalidInput("initial.pred: identically zero; convergence stopping needs v0 != 0");
}

struct MonitoredRun {
    SimulationResult result;
    std::vector<DiagnosticsRecord> records;
    std::vector<State> states;
    std::vector<Violation> violations;
    std::optional<std::string> aborted;  ///< fail-fast message
};

MonitoredRun run_monitored(const Domain& domain, const LVParams& p, const VertexField& u0, const VertexField& v0,
                           const SolverConfig& solver, bool fail_fast, bool keep_states) {
    const std::optional<Equilibrium> eq = coexistence_holds(p) ? std::optional(equilibrium(p)) : std::nullopt;
    MonitorOptions mopts;
    const State s0 = initial_state(domain, u0, v0);
    mopts.box = bounds(p, s0.prey, s0.predator);
    mopts.positivity_armed = s0.prey.max() > 0.0 && s0.predator.max() > 0.0;
    mopts.fail_fast = fail_fast;
    TrajectoryMonitor monitor(domain, p, eq, mopts);

    MonitoredRun run;
    State last;
    std::size_t last_step = 0;
    try {
        run.result = simulate(domain, p, u0, v0, solver, [&](const State& s, std::size_t k) {
            last = s;
            last_step = k;
            if (keep_states) run.states.push_back(s);
            monitor.observe(s);
        });
    } catch (const InvariantViolation& v) {
        run.aborted = v.what();
        run.result.reason = StopReason::failure;
        run.result.failure = v.what();
        run.result.steps = last_step;
        run.result.dt = solver.dt.value_or(stable_dt(domain.graph(), p, mopts.box, solver.safety));
        run.result.final_state = std::move(last);
    }
    run.records = monitor.records();
    run.violations = monitor.violations();
    return run;
}

}  // namespace

int cmd_simulate(const fs::path& config, const Options& opts, std::ostream& out, std::ostream& err) {
    std::optional<Prepared> prep;
    try {
        prep.emplace(prepare(config, opts));
        require_convergence_hypotheses(prep->cfg, prep->cfg.params, prep->u0, prep->v0);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }
    const auto& [cfg, domain, u0, v0] = *prep;
    const LVParams& p = cfg.params;

    MonitoredRun run = run_monitored(domain, p, u0, v0, cfg.solver, opts.fail_fast, true);

    try {
        if (!run.records.empty()) {
            write_states(output_path(opts, cfg.states_path).string(), domain.graph(), run.states);
            write_timeseries(output_path(opts, cfg.diagnostics_path).string(), run.records);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }

    const auto& r = run.result;
    const auto& fs_ = r.final_state;
    out << "mode: " << (domain.neumann() ? "neumann" : "full") << '\n';
    out << "method: " << to_string(cfg.solver.method) << "  dt: " << format_double(r.dt) << '\n';
    out << "stop reason: " << to_string(r.reason) << "  steps: " << r.steps << "  t: " << format_double(fs_.time)
        << '\n';
    if (fs_.prey.size() > 0) {
        out << "prey: min " << format_double(fs_.prey.min()) << " max " << format_double(fs_.prey.max()) << '\n';
        out << "pred: min " << format_double(fs_.predator.min()) << " max " << format_double(fs_.predator.max())
            << '\n';
        if (coexistence_holds(p)) {
            const auto eq = equilibrium(p);
            out << "equilibrium: e " << format_double(eq.e) << " g " << format_double(eq.g) << "  distance "
                << format_double(distance_to_equilibrium(fs_, eq)) << '\n';
        }
    }

    if (run.aborted) {
        err << "invariant violation: " << *run.aborted << '\n';
        return invariant_violation;
    }
    const std::size_t shown = std::min<std::size_t>(run.violations.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& v = run.violations[i];
        err << "invariant violation: " << v.check << " at t=" << format_double(v.t) << ": " << v.message << '\n';
    }
    if (run.violations.size() > shown) err << "(" << run.violations.size() - shown << " more violations)\n";
    if (r.reason == StopReason::failure) err << "integration failure: " << r.failure << '\n';
    if (!run.violations.empty() || r.reason == StopReason::failure) return invariant_violation;
    if (cfg.solver.convergence_tol > 0.0 && r.reason != StopReason::converged) {
        err << "not converged: horizon t_end=" << format_double(cfg.solver.t_end) << " reached\n";
        return not_converged;
    }
    return ok;
}

int cmd_equilibrium(const std::vector<double>& values, std::ostream& out, std::ostream& err) {
    if (values.size() != 8) {
        err << "error: expected 8 parameters d1 d2 a1 a2 b1 b2 c1 c2, got " << values.size() << '\n';
        return invalid_input;
    }
    LVParams p;
    for (std::size_t i = 0; i < 8; ++i) param_ref(p, kParamNames[i]) = values[i];
    try {
        p.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }
    const double prey_floor = p.a1 / p.b1;
    out << "a1/c1 = " << format_double(p.a1 / p.c1) << ", a2/c2 = " << format_double(p.a2 / p.c2) << '\n';
    out << "prey bound component a1/b1 = " << format_double(prey_floor) << '\n';
    out << "predator bound component (a2 + b2*a1/b1)/c2 = " << format_double((p.a2 + p.b2 * prey_floor) / p.c2)
        << '\n';
    if (!coexistence_holds(p)) {
        out << "coexistence: violated (a1/c1 > a2/c2 fails); no positive constant equilibrium\n";
        return invalid_input;
    }
    const auto eq = equilibrium(p);
    out << "coexistence: holds\n";
    out << "e=" << format_double(eq.e) << " g=" << format_double(eq.g) << '\n';
    return ok;
}

int cmd_verify(std::uint64_t seed, std::size_t trials, const std::vector<std::string>& only, const Options& opts,
               std::ostream& out, std::ostream& err) {
    const auto& families = identity_families();
    auto scenarios = bundled_scenarios(seed);

    std::vector<std::string> identity_filter;
    std::vector<Scenario> chosen;
    bool run_identities = only.empty();
    if (only.empty()) chosen = scenarios;
    for (const auto& name : only) {
        if (std::find(families.begin(), families.end(), name) != families.end()) {
            identity_filter.push_back(name);
            run_identities = true;
            continue;
        }
        auto it = std::find_if(scenarios.begin(), scenarios.end(), [&](const Scenario& s) { return s.name == name; });
        if (it == scenarios.end()) {
            err << "error: unknown check or scenario '" << name << "'. Known names:\n";
            for (const auto& f : families) err << "  " << f << '\n';
            for (const auto& s : scenarios) err << "  " << s.name << '\n';
            return invalid_input;
        }
        chosen.push_back(*it);
    }
    if (trials == 0) {
        err << "error: --trials must be at least 1\n";
        return invalid_input;
    }

    VerificationReport report;
    if (run_identities) report.append(verify_identities(seed, trials, {identity_filter, false}));
    if (!chosen.empty()) report.append(verify_theorems(chosen, job_count(opts)));
    write_report(out, report);
    return report.all_pass() ? ok : invariant_violation;
}

int cmd_sweep(const fs::path& config, const Options& opts, std::ostream& out, std::ostream& err) {
    std::optional<Prepared> prep;
    try {
        prep.emplace(prepare(config, opts));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }
    const auto& [cfg, domain, u0, v0] = *prep;
    if (cfg.grid.empty()) {
        err << "error: sweep: grid is empty\n";
        return invalid_input;
    }

    // Cartesian product in canonical parameter order, last parameter fastest.
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    for (const char* name : kParamNames)
        if (auto it = cfg.grid.find(name); it != cfg.grid.end()) {
            if (it->second.empty()) {
                err << "error: sweep." << name << ": no values\n";
                return invalid_input;
            }
            axes.emplace_back(name, it->second);
        }
    std::vector<LVParams> points{cfg.params};
    for (const auto& [name, values] : axes) {
        std::vector<LVParams> next;
        for (const auto& base : points)
            for (double v : values) {
                LVParams q = base;
                param_ref(q, name) = v;
                next.push_back(q);
            }
        points = std::move(next);
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            points[i].validate();
        } catch (const Error& e) {
            err << "error: sweep point " << i << ": " << e.what() << '\n';
            return invalid_input;
        }
    }

    struct Row {
        std::string status;
        std::string reason;
        std::optional<double> time_to_tol;
        std::optional<double> final_error;
    };
    std::vector<Row> rows(points.size());
    const bool stopping = cfg.solver.convergence_tol > 0.0;
    auto run_point = [&](std::size_t i) {
        const LVParams& p = points[i];
        Row& row = rows[i];
        if (stopping && !coexistence_holds(p)) {
            row = {"skipped", "coexistence-violated", std::nullopt, std::nullopt};
            return;
        }
        try {
            require_convergence_hypotheses(cfg, p, u0, v0);
            MonitoredRun run = run_monitored(domain, p, u0, v0, cfg.solver, opts.fail_fast, false);
            row.reason = std::string(to_string(run.result.reason));
            row.time_to_tol = run.result.time_to_tolerance;
            if (coexistence_holds(p) && run.result.final_state.prey.size() > 0)
                row.final_error = distance_to_equilibrium(run.result.final_state, equilibrium(p));
            row.status = run.aborted || !run.violations.empty() ? "violation"
                         : run.result.reason == StopReason::failure ? "failure"
                                                                     : "ok";
        } catch (const Error& e) {
            std::string why = e.what();
            std::replace(why.begin(), why.end(), ',', ';');
            row = {"failure", why, std::nullopt, std::nullopt};
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) run_point(i);
    };
    const unsigned n = std::min<unsigned>(job_count(opts), static_cast<unsigned>(points.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "index";
    for (const char* name : kParamNames) csv << ',' << name;
    csv << ",status,stop_reason,time_to_tolerance,final_error\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        LVParams p = points[i];
        csv << i;
        for (const char* name : kParamNames) csv << ',' << format_double(param_ref(p, name));
        csv << ',' << rows[i].status << ',' << rows[i].reason << ','
            << (rows[i].time_to_tol ? format_double(*rows[i].time_to_tol) : "") << ','
            << (rows[i].final_error ? format_double(*rows[i].final_error) : "") << '\n';
    }
    const fs::path summary = output_path(opts, cfg.summary_path);
    std::ofstream file(summary, std::ios::binary);
    if (!file || !(file << csv.str())) {
        err << "error: cannot write '" << summary.string() << "'\n";
        return invalid_input;
    }
    out << csv.str();
    return ok;
}

}  // namespace lvg::cli
