#include "lvgraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lvgraph/calculus.hpp"
#include "lvgraph/error.hpp"

namespace lvg {

std::optional<Method> method_from_name(std::string_view name) {
    if (name == "euler") return Method::euler;
    if (name == "rk4") return Method::rk4;
    return std::nullopt;
}

std::string_view to_string(Method m) { return m == Method::euler ? "euler" : "rk4"; }

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::t_end: return "t_end";
        case StopReason::converged: return "converged";
        case StopReason::failure: return "failure";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (dt && !(std::isfinite(*dt) && *dt > 0.0)) throw InvalidInput("solver.dt must be positive or \"auto\"");
    if (!(std::isfinite(t_end) && t_end > 0.0)) throw InvalidInput("solver.t_end must be positive");
    if (!(convergence_tol >= 0.0) || !std::isfinite(convergence_tol))
        throw InvalidInput("solver.convergence_tol must be nonnegative");
    if (record_every < 1) throw InvalidInput("solver.record_every must be at least 1");
    if (!(safety > 0.0 && safety <= 1.0)) throw InvalidInput("solver.safety must lie in (0, 1]");
}

double stable_dt(const WeightedGraph& g, const LVParams& p, const Bounds& b, double safety) {
    double lambda = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        double degree = 0.0;
        for (const auto& n : g.neighbors(x)) degree += n.weight;
        lambda = std::max(lambda, degree / g.measure(x));
    }
    const double r = p.a1 + 2.0 * p.b1 * b.prey + p.c1 * b.pred + p.a2 + p.b2 * b.prey + 2.0 * p.c2 * b.pred;
    return safety / (2.0 * std::max(p.d1, p.d2) * lambda + r);
}

VertexField enforce_neumann(const BoundedSubgraph& s, const VertexField& field) {
    const auto& g = s.closure();
    require_domain(g, field, "enforce_neumann");
    VertexField out = field;
    for (auto z : s.boundary()) {
        double num = 0.0;
        double den = 0.0;
        for (const auto& n : g.neighbors(z)) {
            num += n.weight * field[n.index];
            den += n.weight;
        }
        out[z] = num / den;
    }
    return out;
}

namespace {

struct Fields {
    VertexField u;
    VertexField v;
};

// Right-hand side at the given (already projected) fields. In Neumann mode only
// interior vertices evolve; boundary entries stay zero.
Fields rhs(const Domain& d, const LVParams& p, const Fields& y, bool reaction_enabled) {
    const auto& g = d.graph();
    const auto* sub = d.subgraph();
    Fields k{VertexField(g.size(), 0.0), VertexField(g.size(), 0.0)};
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (sub && !sub->is_interior(x)) continue;
        double fu = p.d1 * laplacian_at(g, y.u, x);
        double fv = p.d2 * laplacian_at(g, y.v, x);
        if (reaction_enabled) {
            auto [ru, rv] = reaction(p, y.u[x], y.v[x]);
            fu += ru;
            fv += rv;
        }
        k.u[x] = fu;
        k.v[x] = fv;
    }
    return k;
}

Fields project(const Domain& d, Fields y) {
    if (const auto* sub = d.subgraph()) {
        y.u = enforce_neumann(*sub, y.u);
        y.v = enforce_neumann(*sub, y.v);
    }
    return y;
}

// y + h * k, entrywise.
Fields axpy(const Fields& y, double h, const Fields& k) {
    Fields out = y;
    for (std::size_t x = 0; x < out.u.size(); ++x) {
        out.u[x] += h * k.u[x];
        out.v[x] += h * k.v[x];
    }
    return out;
}

void check_finite(const WeightedGraph& g, const Fields& y, double time) {
    for (std::size_t x = 0; x < g.size(); ++x) {
        const char* species = !std::isfinite(y.u[x]) ? "prey" : !std::isfinite(y.v[x]) ? "predator" : nullptr;
        if (species) {
            std::ostringstream msg;
            msg << "non-finite " << species << " value at vertex '" << g.id(x) << "' at t=" << time;
            throw IntegrationError(msg.str());
        }
    }
}

}  // namespace

State step(const Domain& d, const LVParams& p, const State& state, double dt, Method method, bool reaction_enabled) {
    if (!(dt > 0.0)) throw PreconditionError("step: dt must be positive");
    const auto& g = d.graph();
    require_domain(g, state.prey, "step (prey)");
    require_domain(g, state.predator, "step (predator)");

    const Fields y{state.prey, state.predator};
    Fields next;
    if (method == Method::euler) {
        next = axpy(y, dt, rhs(d, p, project(d, y), reaction_enabled));
    } else {
        const Fields k1 = rhs(d, p, project(d, y), reaction_enabled);
        const Fields k2 = rhs(d, p, project(d, axpy(y, 0.5 * dt, k1)), reaction_enabled);
        const Fields k3 = rhs(d, p, project(d, axpy(y, 0.5 * dt, k2)), reaction_enabled);
        const Fields k4 = rhs(d, p, project(d, axpy(y, dt, k3)), reaction_enabled);
        next = y;
        for (std::size_t x = 0; x < g.size(); ++x) {
            next.u[x] += dt / 6.0 * (k1.u[x] + 2.0 * k2.u[x] + 2.0 * k3.u[x] + k4.u[x]);
            next.v[x] += dt / 6.0 * (k1.v[x] + 2.0 * k2.v[x] + 2.0 * k3.v[x] + k4.v[x]);
        }
    }
    next = project(d, std::move(next));
    check_finite(g, next, state.time + dt);
    return {state.time + dt, std::move(next.u), std::move(next.v)};
}

double distance_to_equilibrium(const State& s, const Equilibrium& eq) {
    double du = 0.0;
    double dv = 0.0;
    for (std::size_t x = 0; x < s.prey.size(); ++x) {
        du = std::max(du, std::abs(s.prey[x] - eq.e));
        dv = std::max(dv, std::abs(s.predator[x] - eq.g));
    }
    return du + dv;
}

State initial_state(const Domain& d, const VertexField& u0, const VertexField& v0) {
    // Boundary values are not free data: the zero-flux condition fixes them.
    if (const auto* s = d.subgraph()) return State{0.0, enforce_neumann(*s, u0), enforce_neumann(*s, v0)};
    return State{0.0, u0, v0};
}

SimulationResult simulate(const Domain& d, const LVParams& p, const VertexField& u0, const VertexField& v0,
                          const SolverConfig& cfg, const RecordSink& sink) {
    p.validate();
    cfg.validate();
    const auto& g = d.graph();
    require_domain(g, u0, "initial prey");
    require_domain(g, v0, "initial predator");
    State state = initial_state(d, u0, v0);
    const Bounds box = bounds(p, state.prey, state.predator);

    std::optional<Equilibrium> eq;
    if (cfg.convergence_tol > 0.0) {
        if (!coexistence_holds(p))
            throw PreconditionError("convergence stopping requires the coexistence condition a1/c1 > a2/c2");
        if (state.prey.max() <= 0.0 || state.predator.max() <= 0.0)
            throw PreconditionError("convergence stopping requires nonzero prey and predator initial data");
        eq = equilibrium(p);
    }

    SimulationResult result;
    result.dt = cfg.dt.value_or(stable_dt(g, p, box, cfg.safety));
    if (sink) sink(state, 0);

    auto converged = [&](const State& s) { return eq && distance_to_equilibrium(s, *eq) <= cfg.convergence_tol; };

    if (converged(state)) {
        result.reason = StopReason::converged;
        result.time_to_tolerance = 0.0;
        result.final_state = std::move(state);
        return result;
    }

    for (std::size_t k = 1;; ++k) {
        double target = static_cast<double>(k) * result.dt;
        // Snap to t_end instead of taking a sliver of a final step.
        if (target > cfg.t_end || cfg.t_end - target <= 1e-9 * result.dt) target = cfg.t_end;
        State next;
        try {
            next = step(d, p, state, target - state.time, cfg.method, cfg.reaction_enabled);
        } catch (const IntegrationError& err) {
            result.reason = StopReason::failure;
            result.failure = err.what();
            result.steps = k - 1;
            result.final_state = std::move(state);
            return result;
        }
        next.time = target;
        state = std::move(next);

        const bool done_converged = converged(state);
        const bool done = done_converged || state.time >= cfg.t_end;
        if (sink && (k % cfg.record_every == 0 || done)) sink(state, k);
        if (done) {
            result.steps = k;
            if (done_converged) {
                result.reason = StopReason::converged;
                result.time_to_tolerance = state.time;
            }
            result.final_state = std::move(state);
            return result;
        }
    }
}

}  // namespace lvg
