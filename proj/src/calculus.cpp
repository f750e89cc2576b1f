#include "lvgraph/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvgraph/error.hpp"

namespace lvg {

namespace {

void require_vertex(const WeightedGraph& g, std::size_t x) {
    if (x >= g.size()) throw PreconditionError("vertex index " + std::to_string(x) + " is outside the domain");
}

}  // namespace

double laplacian_at(const WeightedGraph& g, const VertexField& u, std::size_t x) {
    require_domain(g, u, "laplacian");
    require_vertex(g, x);
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) sum += n.weight * (u[n.index] - u[x]);
    return sum / g.measure(x);
}

VertexField laplacian(const WeightedGraph& g, const VertexField& u) {
    require_domain(g, u, "laplacian");
    VertexField out(g.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) out[x] = laplacian_at(g, u, x);
    return out;
}

double laplacian_omega(const BoundedSubgraph& s, const VertexField& u, std::size_t at) {
    return laplacian_at(s.closure(), u, at);
}

double normal_derivative(const BoundedSubgraph& s, const VertexField& u, std::size_t z) {
    const auto& g = s.closure();
    require_domain(g, u, "normal_derivative");
    require_vertex(g, z);
    if (!s.is_boundary(z)) throw PreconditionError("vertex '" + g.id(z) + "' is not a boundary vertex");
    // Closure edges at a boundary vertex all lead into the interior.
    double sum = 0.0;
    for (const auto& n : g.neighbors(z)) sum += (u[z] - u[n.index]) * n.weight;
    return sum / g.measure(z);
}

double max_normal_derivative(const BoundedSubgraph& s, const VertexField& u) {
    double worst = 0.0;
    for (auto z : s.boundary()) worst = std::max(worst, std::abs(normal_derivative(s, u, z)));
    return worst;
}

double gradient_form(const WeightedGraph& g, const VertexField& u, const VertexField& v, std::size_t x) {
    require_domain(g, u, "gradient_form");
    require_domain(g, v, "gradient_form");
    require_vertex(g, x);
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) sum += n.weight * ((u[n.index] - u[x]) * (v[n.index] - v[x]));
    return sum / (2.0 * g.measure(x));
}

double gradient_form(const BoundedSubgraph& s, const VertexField& u, const VertexField& v, std::size_t x) {
    return gradient_form(s.closure(), u, v, x);
}

VertexField gradient_form(const WeightedGraph& g, const VertexField& u, const VertexField& v) {
    VertexField out(g.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) out[x] = gradient_form(g, u, v, x);
    return out;
}

double gradient_length(const WeightedGraph& g, const VertexField& u, std::size_t x) {
    // Γ(u,u) is a sum of nonnegative terms, so the sqrt argument is never negative.
    return std::sqrt(gradient_form(g, u, u, x));
}

double gradient_length(const BoundedSubgraph& s, const VertexField& u, std::size_t x) {
    return gradient_length(s.closure(), u, x);
}

double integrate(const WeightedGraph& g, const VertexField& u) {
    require_domain(g, u, "integrate");
    double sum = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) sum += g.measure(x) * u[x];
    return sum;
}

double integrate(const BoundedSubgraph& s, const VertexField& u) { return integrate(s.closure(), u); }

double green_identity_residual(const WeightedGraph& g, const VertexField& u, const VertexField& v) {
    require_domain(g, u, "green_identity_residual");
    require_domain(g, v, "green_identity_residual");
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        lhs += g.measure(x) * v[x] * laplacian_at(g, u, x);
        rhs += g.measure(x) * gradient_form(g, u, v, x);
    }
    return lhs + rhs;
}

double green_identity_residual(const BoundedSubgraph& s, const VertexField& u, const VertexField& v) {
    return green_identity_residual(s.closure(), u, v);
}

}  // namespace lvg
