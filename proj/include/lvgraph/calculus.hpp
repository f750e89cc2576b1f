#pragma once

#include <cstddef>

#include "lvgraph/graph.hpp"

namespace lvg {

// Discrete calculus on a weighted graph. Every operator takes the graph it acts
// on: either a whole graph G, or the closure graph of a BoundedSubgraph (whose
// edge set already omits boundary-boundary edges). Overloads on
// BoundedSubgraph forward to the closure.

/// (Δu)(x) = (1/μ(x)) Σ_{y~x} w_xy (u(y) − u(x)) at every vertex.
VertexField laplacian(const WeightedGraph& g, const VertexField& u);

/// Single-vertex Laplacian.
double laplacian_at(const WeightedGraph& g, const VertexField& u, std::size_t x);

/// Δ_Ω u at a vertex of the closure, given by closure index.
double laplacian_omega(const BoundedSubgraph& s, const VertexField& u, std::size_t at);

/// Outward normal derivative at boundary vertex `z` (closure index):
/// Σ_{y∈Ω, y~z} (u(z) − u(y)) w_zy / μ(z). Throws PreconditionError if z ∉ ∂Ω.
double normal_derivative(const BoundedSubgraph& s, const VertexField& u, std::size_t z);

/// Largest |∂u/∂n| over the boundary.
double max_normal_derivative(const BoundedSubgraph& s, const VertexField& u);

/// Γ(u,v)(x) = (1/(2μ(x))) Σ_{y~x} w_xy (u(y)−u(x))(v(y)−v(x)).
double gradient_form(const WeightedGraph& g, const VertexField& u, const VertexField& v, std::size_t x);
double gradient_form(const BoundedSubgraph& s, const VertexField& u, const VertexField& v, std::size_t x);

/// Γ(u,v) at every vertex.
VertexField gradient_form(const WeightedGraph& g, const VertexField& u, const VertexField& v);

/// |∇u|(x) = sqrt(Γ(u,u)(x)).
double gradient_length(const WeightedGraph& g, const VertexField& u, std::size_t x);
double gradient_length(const BoundedSubgraph& s, const VertexField& u, std::size_t x);

/// ∫ u dμ = Σ_x μ(x) u(x) over the whole domain (all of Ω ∪ ∂Ω for a subgraph).
double integrate(const WeightedGraph& g, const VertexField& u);
double integrate(const BoundedSubgraph& s, const VertexField& u);

/// ∫ v Δu dμ + ∫ Γ(u,v) dμ, which vanishes in exact arithmetic.
double green_identity_residual(const WeightedGraph& g, const VertexField& u, const VertexField& v);
double green_identity_residual(const BoundedSubgraph& s, const VertexField& u, const VertexField& v);

}  // namespace lvg
