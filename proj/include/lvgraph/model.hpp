#pragma once

#include <utility>

#include "lvgraph/graph.hpp"

namespace lvg {

/// The eight positive constants of the prey-predator system
///   u_t = d1 Δu + u (a1 − b1 u − c1 v)
///   v_t = d2 Δv + v (a2 + b2 u − c2 v)
struct LVParams {
    double d1 = 1.0;  ///< prey diffusion rate
    double d2 = 1.0;  ///< predator diffusion rate
    double a1 = 1.0;  ///< prey growth rate
    double a2 = 1.0;  ///< predator growth rate
    double b1 = 1.0;  ///< prey self-limitation
    double b2 = 1.0;  ///< prey-to-predator conversion
    double c1 = 1.0;  ///< predation rate on prey
    double c2 = 1.0;  ///< predator self-limitation

    /// Throws InvalidInput naming the first nonpositive or non-finite constant.
    void validate() const;

    friend bool operator==(const LVParams&, const LVParams&) = default;
};

/// Positive constant steady state (e, g).
struct Equilibrium {
    double e;
    double g;
};

/// Upper corner of the invariant box [0, prey] x [0, pred].
struct Bounds {
    double prey;
    double pred;
};

/// a1/c1 > a2/c2, evaluated as a1·c2 > a2·c1.
bool coexistence_holds(const LVParams& p);

/// Throws PreconditionError when coexistence fails.
Equilibrium equilibrium(const LVParams& p);

/// prey = max(max u0, a1/b1); pred = max((a2 + b2·prey)/c2, max v0).
/// Throws PreconditionError on negative initial data.
Bounds bounds(const LVParams& p, const VertexField& u0, const VertexField& v0);

/// (u (a1 − b1 u − c1 v), v (a2 + b2 u − c2 v)).
std::pair<double, double> reaction(const LVParams& p, double u, double v);

/// E(u,v) = b2 u − b2 e ln(u/(b2 e)) + c1 v − c1 g ln(v/(c1 g)); requires u, v > 0.
double lyapunov_density(const LVParams& p, const Equilibrium& eq, double u, double v);

/// ∫ E(u(x), v(x)) dμ over the domain. Throws PreconditionError naming the
/// first vertex with a nonpositive value.
double lyapunov_functional(const WeightedGraph& domain, const LVParams& p, const Equilibrium& eq,
                           const VertexField& u, const VertexField& v);
double lyapunov_functional(const BoundedSubgraph& s, const LVParams& p, const Equilibrium& eq,
                           const VertexField& u, const VertexField& v);

/// Reaction part of dL/dt plus the dissipation it should equal:
///   b2(1−e/u) u (a1−b1u−c1v) + c1(1−g/v) v (a2+b2u−c2v) + b1 b2 (u−e)² + c1 c2 (v−g)².
/// Zero in exact arithmetic.
double dissipation_identity_residual(const LVParams& p, const Equilibrium& eq, double u, double v);

/// ∫ (field − target)² dμ.
double f_functional(const WeightedGraph& domain, const VertexField& field, double target);
double f_functional(const BoundedSubgraph& s, const VertexField& field, double target);

}  // namespace lvg
