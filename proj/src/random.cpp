#include "lvgraph/random.hpp"

#include <algorithm>
#include <set>

#include "lvgraph/error.hpp"

namespace lvg {

WeightedGraph random_connected_graph(Rng& rng, std::size_t n, double extra_edge_p, double lo, double hi) {
    if (n < 1) throw PreconditionError("random graph needs at least one vertex");
    std::vector<WeightedGraph::VertexSpec> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back({std::to_string(i + 1), rng.uniform(lo, hi)});

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    if (n == 2) {
        pairs.insert({0, 1});
    } else if (n > 2) {
        std::vector<std::size_t> code(n - 2);
        for (auto& c : code) c = rng.index(n);
        std::vector<std::size_t> degree(n, 1);
        for (auto c : code) ++degree[c];
        for (auto c : code) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            pairs.insert({std::min(leaf, c), std::max(leaf, c)});
            --degree[leaf];
            --degree[c];
        }
        std::size_t a = n, b = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (degree[i] == 1) (a == n ? a : b) = i;
        }
        pairs.insert({std::min(a, b), std::max(a, b)});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!pairs.contains({i, j}) && rng.bernoulli(extra_edge_p)) pairs.insert({i, j});

    std::vector<WeightedGraph::EdgeSpec> edges;
    for (auto [i, j] : pairs) edges.push_back({vertices[i].id, vertices[j].id, rng.uniform(lo, hi)});
    return WeightedGraph(std::move(vertices), std::move(edges));
}

std::vector<std::string> random_connected_interior(Rng& rng, const WeightedGraph& g) {
    if (g.size() < 2) throw PreconditionError("random interior needs at least two vertices");
    const std::size_t target = 1 + rng.index(g.size() - 1);
    std::vector<bool> in(g.size(), false);
    std::vector<std::size_t> chosen{rng.index(g.size())};
    in[chosen.front()] = true;
    while (chosen.size() < target) {
        std::vector<std::size_t> frontier;
        std::vector<bool> queued(g.size(), false);
        for (auto x : chosen)
            for (const auto& nb : g.neighbors(x))
                if (!in[nb.index] && !queued[nb.index]) {
                    queued[nb.index] = true;
                    frontier.push_back(nb.index);
                }
        std::sort(frontier.begin(), frontier.end());
        auto pick = frontier[rng.index(frontier.size())];
        in[pick] = true;
        chosen.push_back(pick);
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::string> ids;
    for (auto x : chosen) ids.push_back(g.id(x));
    return ids;
}

VertexField random_field(Rng& rng, std::size_t n, double lo, double hi) {
    VertexField f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) f[i] = rng.uniform(lo, hi);
    return f;
}

}  // namespace lvg
