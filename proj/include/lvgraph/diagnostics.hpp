#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lvgraph/model.hpp"
#include "lvgraph/solver.hpp"

namespace lvg {

/// Per-record summary of a state. L is absent whenever some field value is
/// not strictly positive; F values are absent only when no equilibrium exists.
struct DiagnosticsRecord {
    double t = 0.0;
    std::optional<double> L;
    std::optional<double> F_prey;
    std::optional<double> F_pred;
    double prey_min = 0.0;
    double prey_max = 0.0;
    double pred_min = 0.0;
    double pred_max = 0.0;
    std::optional<double> neumann_residual;  ///< Neumann mode only

    friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

DiagnosticsRecord record(const Domain& d, const LVParams& p, const std::optional<Equilibrium>& eq,
                         const State& state);

// ---------------------------------------------------------------------------
// Trajectory monitors

struct MonitorOptions {
    Bounds box{0.0, 0.0};
    double region_slack = 1e-9;
    bool positivity_armed = false;  ///< set when both initial fields are nonzero
    double lyapunov_tol = 1e-10;
    double neumann_tol = 1e-12;
    bool fail_fast = false;
};

struct Violation {
    std::string check;
    double t;
    std::string message;
};

/// Consumes recorded states in time order, keeps their diagnostics, and
/// checks the invariant box, strict positivity after t = 0, monotonicity of L,
/// and the Neumann flux residual after t = 0. In fail-fast mode the first
/// violation throws InvariantViolation.
class TrajectoryMonitor {
public:
    TrajectoryMonitor(const Domain& d, const LVParams& p, std::optional<Equilibrium> eq, MonitorOptions opts);

    void observe(const State& s);

    const std::vector<DiagnosticsRecord>& records() const noexcept { return records_; }
    const std::vector<Violation>& violations() const noexcept { return violations_; }

    /// Worst observed quantity per check, each normalised so that <= 0 passes
    /// for the region and Lyapunov checks.
    double worst_region_excess() const noexcept { return worst_region_; }
    double worst_lyapunov_increase() const noexcept { return worst_lyapunov_; }
    double worst_neumann_residual() const noexcept { return worst_neumann_; }
    double min_positive_value() const noexcept { return min_positive_; }

private:
    void fail(std::string check, double t, std::string message);

    const Domain* domain_;
    LVParams params_;
    std::optional<Equilibrium> eq_;
    MonitorOptions opts_;
    std::vector<DiagnosticsRecord> records_;
    std::vector<Violation> violations_;
    double worst_region_ = -1e300;
    double worst_lyapunov_ = -1e300;
    double worst_neumann_ = 0.0;
    double min_positive_ = 1e300;
};

/// Tail check on F: over the last 90% of the records,
/// F(t_{k+1}) <= F(t_k) + tol (1 + F(t_k)). Returns the worst excess
/// (<= 0 passes) and the record index where it occurred.
struct TailDecay {
    double worst_excess;
    std::size_t at;
};
TailDecay f_tail_decay(const std::vector<DiagnosticsRecord>& records, bool prey, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Verification reports

enum class CheckStatus { pass, fail, skip };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string witness;  ///< required when status == fail
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::size_t count(CheckStatus s) const;
    void append(const VerificationReport& other);
};

void write_report(std::ostream& out, const VerificationReport& report);

/// Families run by verify_identities, in report order.
const std::vector<std::string>& identity_families();

struct IdentityOptions {
    /// Restrict to these families (empty: all).
    std::vector<std::string> only;
    /// Fault injection: evaluate Δ with one edge weight negated.
    bool corrupt_laplacian = false;
};

/// Randomised checks of the Green identity (whole graphs and closures),
/// symmetry and bilinearity of Γ, the dissipation identity, and the
/// equilibrium residuals. Deterministic for a given seed.
/// Throws PreconditionError when trials == 0.
VerificationReport verify_identities(std::uint64_t seed, std::size_t trials, const IdentityOptions& opts = {});

/// A self-contained simulation scenario.
struct Scenario {
    std::string name;
    Domain domain;
    LVParams params;
    VertexField u0;
    VertexField v0;
    SolverConfig solver;
};

/// Bundled scenarios; random initial data is drawn from `seed`.
std::vector<Scenario> bundled_scenarios(std::uint64_t seed = 1);

struct ScenarioOutcome {
    SimulationResult result;
    std::vector<DiagnosticsRecord> records;
    VerificationReport report;
};

/// Runs one scenario and checks every applicable theorem-level property.
ScenarioOutcome run_scenario(const Scenario& sc);

/// Runs each scenario (concurrently when `jobs` > 1) and concatenates the
/// reports in scenario order.
VerificationReport verify_theorems(const std::vector<Scenario>& scenarios, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// CSV output

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

void write_timeseries(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_timeseries(const std::string& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> parse_timeseries(std::string_view csv);

void write_states(std::ostream& out, const WeightedGraph& domain, const std::vector<State>& trajectory);
void write_states(const std::string& path, const WeightedGraph& domain, const std::vector<State>& trajectory);

}  // namespace lvg
