#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "lvgraph/graph.hpp"
#include "lvgraph/model.hpp"

namespace lvg {

/// Spatial setting of a simulation: a whole graph (no boundary condition) or a
/// bounded subgraph with the zero-flux Neumann condition on its boundary.
class Domain {
public:
    explicit Domain(WeightedGraph g) : setting_(std::move(g)) {}
    explicit Domain(BoundedSubgraph s) : setting_(std::move(s)) {}

    bool neumann() const noexcept { return std::holds_alternative<BoundedSubgraph>(setting_); }

    /// Graph the operators act on: V in full mode, the closure in Neumann mode.
    const WeightedGraph& graph() const noexcept {
        if (auto* s = std::get_if<BoundedSubgraph>(&setting_)) return s->closure();
        return std::get<WeightedGraph>(setting_);
    }

    /// Null in full mode.
    const BoundedSubgraph* subgraph() const noexcept { return std::get_if<BoundedSubgraph>(&setting_); }

private:
    std::variant<WeightedGraph, BoundedSubgraph> setting_;
};

struct State {
    double time = 0.0;
    VertexField prey;
    VertexField predator;
};

enum class Method { euler, rk4 };

std::optional<Method> method_from_name(std::string_view name);
std::string_view to_string(Method m);

struct SolverConfig {
    Method method = Method::rk4;
    std::optional<double> dt;      ///< nullopt means "auto" (stable_dt with `safety`)
    double t_end = 100.0;
    double convergence_tol = 0.0;  ///< stop once sup|u−e| + sup|v−g| <= tol; 0 disables
    std::size_t record_every = 1;
    double safety = 0.5;
    bool reaction_enabled = true;  ///< test hook: false integrates pure diffusion

    /// Throws InvalidInput naming the offending field.
    void validate() const;
};

/// safety / (2·max(d1,d2)·Λ + R), with Λ = max_x (1/μ(x)) Σ_{y~x} w_xy and R a
/// Lipschitz bound of the reaction on the invariant box.
double stable_dt(const WeightedGraph& g, const LVParams& p, const Bounds& b, double safety);

/// Replaces each boundary value by the w-weighted mean of its interior
/// neighbours, which makes the outward normal derivative vanish there.
VertexField enforce_neumann(const BoundedSubgraph& s, const VertexField& field);

/// t = 0 state for the given initial data: unchanged in full mode, boundary
/// values projected by enforce_neumann in Neumann mode.
State initial_state(const Domain& d, const VertexField& u0, const VertexField& v0);

/// One explicit step of size dt. Throws IntegrationError on a non-finite value.
State step(const Domain& d, const LVParams& p, const State& state, double dt, Method method,
           bool reaction_enabled = true);

enum class StopReason { t_end, converged, failure };

std::string_view to_string(StopReason r);

struct SimulationResult {
    State final_state;
    std::size_t steps = 0;
    StopReason reason = StopReason::t_end;
    double dt = 0.0;
    std::optional<double> time_to_tolerance;
    std::string failure;  ///< set when reason == failure
};

/// Called with every recorded state (t = 0, every `record_every` steps, and
/// the final step). Sinks may throw to abort the run; the exception propagates.
using RecordSink = std::function<void(const State&, std::size_t step)>;

/// sup_x |u − e| + sup_x |v − g|.
double distance_to_equilibrium(const State& s, const Equilibrium& eq);

/// Integrates until t_end or convergence. With convergence stopping enabled
/// the coexistence condition and nontrivial initial data are required
/// (PreconditionError otherwise). Non-finite values end the run with
/// StopReason::failure. The first record is initial_state(d, u0, v0).
SimulationResult simulate(const Domain& d, const LVParams& p, const VertexField& u0, const VertexField& v0,
                          const SolverConfig& cfg, const RecordSink& sink = {});

}  // namespace lvg
