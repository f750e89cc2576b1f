#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lvg {

/// Undirected edge between two vertex indices. Stored once; the weight is
/// shared by both orientations so w_xy = w_yx holds structurally.
struct Edge {
    std::size_t a;
    std::size_t b;
    double weight;
};

struct Neighbor {
    std::size_t index;
    double weight;
};

/// Finite connected graph with symmetric positive edge weights and a positive
/// vertex measure. Vertices keep their insertion order, which fixes every
/// summation order downstream. Instances are validated on construction and
/// immutable afterwards.
class WeightedGraph {
public:
    struct VertexSpec {
        std::string id;
        double measure;
    };
    struct EdgeSpec {
        std::string a;
        std::string b;
        double weight;
    };

    /// Throws InvalidInput on duplicate vertices or edges, self-loops, unknown
    /// endpoints, nonpositive or non-finite weights and measures, an empty
    /// vertex set, or a disconnected graph.
    WeightedGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::string& id(std::size_t i) const { return ids_.at(i); }
    std::span<const std::string> ids() const noexcept { return ids_; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    double measure(std::size_t i) const { return measure_.at(i); }
    std::span<const double> measures() const noexcept { return measure_; }
    double total_measure() const noexcept;

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Neighbor> neighbors(std::size_t i) const { return adjacency_.at(i); }

    /// Weight of edge {i, j}, or nullopt when the vertices are not adjacent.
    std::optional<double> weight(std::size_t i, std::size_t j) const;

    friend bool operator==(const WeightedGraph& lhs, const WeightedGraph& rhs);

private:
    std::vector<std::string> ids_;
    std::vector<double> measure_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index_;
};

/// Real-valued function on the vertex set of one domain (V or the closure of
/// a bounded subgraph), indexed in the domain's vertex order.
class VertexField {
public:
    VertexField() = default;
    explicit VertexField(std::vector<double> values) : values_(std::move(values)) {}
    VertexField(std::size_t n, double value) : values_(n, value) {}

    static VertexField constant(const WeightedGraph& domain, double value) {
        return VertexField(domain.size(), value);
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double min() const;
    double max() const;

    friend bool operator==(const VertexField&, const VertexField&) = default;

private:
    std::vector<double> values_;
};

/// Throws DomainMismatch unless `field` has exactly one value per vertex of `domain`.
void require_domain(const WeightedGraph& domain, const VertexField& field, std::string_view what);

/// Interior set Ω of a parent graph together with its derived vertex boundary
/// and the closure graph on Ω ∪ ∂Ω. The closure keeps every parent edge with
/// at least one endpoint in Ω and drops boundary-boundary edges.
class BoundedSubgraph {
public:
    const WeightedGraph& parent() const noexcept { return parent_; }

    /// Closure graph; its vertex order is the parent order restricted to Ω ∪ ∂Ω.
    const WeightedGraph& closure() const noexcept { return closure_; }

    /// Closure indices of interior and boundary vertices, in closure order.
    std::span<const std::size_t> interior() const noexcept { return interior_; }
    std::span<const std::size_t> boundary() const noexcept { return boundary_; }

    bool is_interior(std::size_t closure_index) const { return interior_mask_.at(closure_index); }
    bool is_boundary(std::size_t closure_index) const { return !interior_mask_.at(closure_index); }

    /// Parent index of a closure vertex.
    std::size_t parent_index(std::size_t closure_index) const { return to_parent_.at(closure_index); }

    std::vector<std::string> interior_ids() const;
    std::vector<std::string> boundary_ids() const;

private:
    friend BoundedSubgraph induce_bounded_subgraph(const WeightedGraph&, std::span<const std::string>);

    BoundedSubgraph(WeightedGraph parent, WeightedGraph closure, std::vector<std::size_t> to_parent,
                    std::vector<bool> interior_mask);

    WeightedGraph parent_;
    WeightedGraph closure_;
    std::vector<std::size_t> to_parent_;
    std::vector<bool> interior_mask_;
    std::vector<std::size_t> interior_;
    std::vector<std::size_t> boundary_;
};

/// Parent-graph ids of ∂Ω = { z ∉ Ω : z ~ y for some y ∈ Ω }, in parent order.
std::vector<std::string> vertex_boundary(const WeightedGraph& g, std::span<const std::string> interior);

/// Throws InvalidInput if the interior is empty, equals V, names an unknown
/// vertex, or induces a disconnected closure.
BoundedSubgraph induce_bounded_subgraph(const WeightedGraph& g, std::span<const std::string> interior);

/// True iff every vertex is reachable from vertex 0. Vacuously true for n <= 1.
bool check_connected(std::size_t vertex_count, std::span<const std::pair<std::size_t, std::size_t>> edges);

// ---------------------------------------------------------------------------
// Graph files

/// Result of parsing a graph file: the graph and the optional `b` markers.
struct ParsedGraph {
    WeightedGraph graph;
    std::vector<std::string> marked_boundary;
};

/// Parses the line-oriented graph format (`v`, `e`, `b` records, `#` comments).
/// When `b` lines are present the complement of the marked set is taken as the
/// interior and the derived boundary must equal the marked set.
/// Throws ParseError (with line number) or InvalidInput.
ParsedGraph parse_graph_file(std::string_view text);

/// Convenience wrapper returning only the graph.
WeightedGraph parse_graph(std::string_view text);

WeightedGraph load_graph(const std::string& path);

/// Writes the graph in the file format with 17 significant digits, so that
/// parse_graph(serialize_graph(g)) == g.
std::string serialize_graph(const WeightedGraph& g);

// ---------------------------------------------------------------------------
// Generators. Vertex ids are "1".."n" (grid: row-major, "1".."rows*cols").

enum class Topology { path, cycle, complete, star, grid };

std::optional<Topology> topology_from_name(std::string_view name);

/// `size` is n for path/cycle/complete/star; grid uses `rows` x `cols`.
WeightedGraph generate(Topology kind, std::size_t size, double weight = 1.0, double measure = 1.0);
WeightedGraph generate_grid(std::size_t rows, std::size_t cols, double weight = 1.0, double measure = 1.0);

}  // namespace lvg
