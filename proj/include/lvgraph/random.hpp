#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lvgraph/graph.hpp"

namespace lvg {

/// Seeded generator with platform-independent draws (std::mt19937_64 is fully
/// specified; the standard distributions are not, so we map bits ourselves).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform in (lo, hi].
    double uniform_left_open(double lo, double hi) { return lo + (hi - lo) * (1.0 - unit()); }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

    bool bernoulli(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

/// Uniform random labelled spanning tree (Prüfer decoding) on n vertices plus
/// each remaining pair independently with probability `extra_edge_p`; weights
/// and measures uniform in [lo, hi). Vertex ids are "1".."n".
WeightedGraph random_connected_graph(Rng& rng, std::size_t n, double extra_edge_p = 0.3, double lo = 0.5,
                                     double hi = 2.0);

/// Connected interior of random size in [1, n−1], grown from a random seed
/// vertex by repeatedly absorbing a random frontier vertex. Its closure is
/// therefore connected and its boundary nonempty.
std::vector<std::string> random_connected_interior(Rng& rng, const WeightedGraph& g);

/// Field with values uniform in [lo, hi).
VertexField random_field(Rng& rng, std::size_t n, double lo, double hi);

}  // namespace lvg
