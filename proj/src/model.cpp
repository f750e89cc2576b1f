#include "lvgraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvgraph/error.hpp"

namespace lvg {

void LVParams::validate() const {
    const std::pair<const char*, double> fields[] = {{"d1", d1}, {"d2", d2}, {"a1", a1}, {"a2", a2},
                                                     {"b1", b1}, {"b2", b2}, {"c1", c1}, {"c2", c2}};
    for (auto [name, value] : fields)
        if (!std::isfinite(value) || value <= 0.0)
            throw InvalidInput(std::string("parameter ") + name + " must be positive, got " + std::to_string(value));
}

bool coexistence_holds(const LVParams& p) { return p.a1 * p.c2 > p.a2 * p.c1; }

Equilibrium equilibrium(const LVParams& p) {
    if (!coexistence_holds(p))
        throw PreconditionError("coexistence condition a1/c1 > a2/c2 fails; no positive constant equilibrium");
    const double denom = p.b1 * p.c2 + p.c1 * p.b2;
    return {(p.a1 * p.c2 - p.c1 * p.a2) / denom, (p.b1 * p.a2 + p.a1 * p.b2) / denom};
}

Bounds bounds(const LVParams& p, const VertexField& u0, const VertexField& v0) {
    if (u0.size() == 0 || v0.size() == 0) throw PreconditionError("bounds: empty initial data");
    if (u0.min() < 0.0) throw PreconditionError("bounds: prey initial data is negative somewhere");
    if (v0.min() < 0.0) throw PreconditionError("bounds: predator initial data is negative somewhere");
    const double prey = std::max(u0.max(), p.a1 / p.b1);
    const double pred = std::max((p.a2 + p.b2 * prey) / p.c2, v0.max());
    return {prey, pred};
}

std::pair<double, double> reaction(const LVParams& p, double u, double v) {
    return {u * (p.a1 - p.b1 * u - p.c1 * v), v * (p.a2 + p.b2 * u - p.c2 * v)};
}

double lyapunov_density(const LVParams& p, const Equilibrium& eq, double u, double v) {
    if (!(u > 0.0) || !(v > 0.0)) throw PreconditionError("lyapunov density needs u > 0 and v > 0");
    return p.b2 * u - p.b2 * eq.e * std::log(u / (p.b2 * eq.e)) + p.c1 * v - p.c1 * eq.g * std::log(v / (p.c1 * eq.g));
}

double lyapunov_functional(const WeightedGraph& domain, const LVParams& p, const Equilibrium& eq,
                           const VertexField& u, const VertexField& v) {
    require_domain(domain, u, "lyapunov_functional");
    require_domain(domain, v, "lyapunov_functional");
    double sum = 0.0;
    for (std::size_t x = 0; x < domain.size(); ++x) {
        if (!(u[x] > 0.0) || !(v[x] > 0.0))
            throw PreconditionError("lyapunov functional: nonpositive value at vertex '" + domain.id(x) + "'");
        sum += domain.measure(x) * lyapunov_density(p, eq, u[x], v[x]);
    }
    return sum;
}

double lyapunov_functional(const BoundedSubgraph& s, const LVParams& p, const Equilibrium& eq,
                           const VertexField& u, const VertexField& v) {
    return lyapunov_functional(s.closure(), p, eq, u, v);
}

double dissipation_identity_residual(const LVParams& p, const Equilibrium& eq, double u, double v) {
    if (!(u > 0.0) || !(v > 0.0)) throw PreconditionError("dissipation identity needs u > 0 and v > 0");
    const auto [fu, fv] = reaction(p, u, v);
    const double production = p.b2 * (1.0 - eq.e / u) * fu + p.c1 * (1.0 - eq.g / v) * fv;
    const double du = u - eq.e;
    const double dv = v - eq.g;
    return production + (p.b1 * p.b2 * du * du + p.c1 * p.c2 * dv * dv);
}

double f_functional(const WeightedGraph& domain, const VertexField& field, double target) {
    require_domain(domain, field, "f_functional");
    double sum = 0.0;
    for (std::size_t x = 0; x < domain.size(); ++x) {
        const double d = field[x] - target;
        sum += domain.measure(x) * d * d;
    }
    return sum;
}

double f_functional(const BoundedSubgraph& s, const VertexField& field, double target) {
    return f_functional(s.closure(), field, target);
}

}  // namespace lvg
