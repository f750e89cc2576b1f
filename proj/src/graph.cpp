#include "lvgraph/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "lvgraph/error.hpp"

namespace lvg {

namespace {

std::pair<std::size_t, std::size_t> key(std::size_t i, std::size_t j) {
    return i < j ? std::pair{i, j} : std::pair{j, i};
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

WeightedGraph::WeightedGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges) {
    if (vertices.empty()) throw InvalidInput("graph has no vertices");

    ids_.reserve(vertices.size());
    measure_.reserve(vertices.size());
    for (auto& v : vertices) {
        if (v.id.empty()) throw InvalidInput("empty vertex id");
        if (!positive_finite(v.measure))
            throw InvalidInput("vertex '" + v.id + "': measure must be positive, got " + std::to_string(v.measure));
        if (!index_.emplace(v.id, ids_.size()).second) throw InvalidInput("duplicate vertex '" + v.id + "'");
        ids_.push_back(std::move(v.id));
        measure_.push_back(v.measure);
    }

    adjacency_.resize(ids_.size());
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
        auto ia = index_of(e.a);
        auto ib = index_of(e.b);
        if (!ia) throw InvalidInput("edge references unknown vertex '" + e.a + "'");
        if (!ib) throw InvalidInput("edge references unknown vertex '" + e.b + "'");
        if (*ia == *ib) throw InvalidInput("self-loop at vertex '" + e.a + "'");
        if (!positive_finite(e.weight))
            throw InvalidInput("edge {" + e.a + "," + e.b + "}: weight must be positive, got " +
                               std::to_string(e.weight));
        if (!edge_index_.emplace(key(*ia, *ib), edges_.size()).second)
            throw InvalidInput("duplicate edge {" + e.a + "," + e.b + "}");
        edges_.push_back({*ia, *ib, e.weight});
        adjacency_[*ia].push_back({*ib, e.weight});
        adjacency_[*ib].push_back({*ia, e.weight});
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(edges_.size());
    for (const auto& e : edges_) pairs.emplace_back(e.a, e.b);
    if (!check_connected(ids_.size(), pairs)) throw InvalidInput("graph is not connected");
}

std::optional<std::size_t> WeightedGraph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double WeightedGraph::total_measure() const noexcept {
    double sum = 0.0;
    for (double m : measure_) sum += m;
    return sum;
}

std::optional<double> WeightedGraph::weight(std::size_t i, std::size_t j) const {
    auto it = edge_index_.find(key(i, j));
    if (it == edge_index_.end()) return std::nullopt;
    return edges_[it->second].weight;
}

bool operator==(const WeightedGraph& lhs, const WeightedGraph& rhs) {
    if (lhs.ids_ != rhs.ids_ || lhs.measure_ != rhs.measure_) return false;
    if (lhs.edges_.size() != rhs.edges_.size()) return false;
    for (const auto& e : lhs.edges_) {
        auto w = rhs.weight(e.a, e.b);
        if (!w || *w != e.weight) return false;
    }
    return true;
}

double VertexField::min() const {
    if (values_.empty()) throw PreconditionError("min of an empty field");
    return *std::min_element(values_.begin(), values_.end());
}

double VertexField::max() const {
    if (values_.empty()) throw PreconditionError("max of an empty field");
    return *std::max_element(values_.begin(), values_.end());
}

void require_domain(const WeightedGraph& domain, const VertexField& field, std::string_view what) {
    if (field.size() != domain.size())
        throw DomainMismatch(std::string(what) + ": field has " + std::to_string(field.size()) +
                             " values but the domain has " + std::to_string(domain.size()) + " vertices");
}

bool check_connected(std::size_t vertex_count, std::span<const std::pair<std::size_t, std::size_t>> edges) {
    if (vertex_count <= 1) return true;
    std::vector<std::size_t> parent(vertex_count);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = vertex_count;
    for (auto [a, b] : edges) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components == 1;
}

// ---------------------------------------------------------------------------

BoundedSubgraph::BoundedSubgraph(WeightedGraph parent, WeightedGraph closure, std::vector<std::size_t> to_parent,
                                 std::vector<bool> interior_mask)
    : parent_(std::move(parent)),
      closure_(std::move(closure)),
      to_parent_(std::move(to_parent)),
      interior_mask_(std::move(interior_mask)) {
    for (std::size_t i = 0; i < interior_mask_.size(); ++i) (interior_mask_[i] ? interior_ : boundary_).push_back(i);
}

std::vector<std::string> BoundedSubgraph::interior_ids() const {
    std::vector<std::string> out;
    for (auto i : interior_) out.push_back(closure_.id(i));
    return out;
}

std::vector<std::string> BoundedSubgraph::boundary_ids() const {
    std::vector<std::string> out;
    for (auto i : boundary_) out.push_back(closure_.id(i));
    return out;
}

namespace {

std::vector<bool> interior_mask_of(const WeightedGraph& g, std::span<const std::string> interior) {
    std::vector<bool> in(g.size(), false);
    for (const auto& id : interior) {
        auto i = g.index_of(id);
        if (!i) throw InvalidInput("interior references unknown vertex '" + id + "'");
        in[*i] = true;
    }
    return in;
}

std::vector<bool> boundary_mask_of(const WeightedGraph& g, const std::vector<bool>& in) {
    std::vector<bool> bd(g.size(), false);
    for (const auto& e : g.edges()) {
        if (in[e.a] && !in[e.b]) bd[e.b] = true;
        if (in[e.b] && !in[e.a]) bd[e.a] = true;
    }
    return bd;
}

}  // namespace

std::vector<std::string> vertex_boundary(const WeightedGraph& g, std::span<const std::string> interior) {
    auto bd = boundary_mask_of(g, interior_mask_of(g, interior));
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (bd[i]) out.push_back(g.id(i));
    return out;
}

BoundedSubgraph induce_bounded_subgraph(const WeightedGraph& g, std::span<const std::string> interior) {
    auto in = interior_mask_of(g, interior);
    auto count = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
    if (count == 0) throw InvalidInput("interior is empty");
    if (count == g.size()) throw InvalidInput("interior equals the whole vertex set; boundary would be empty");
    auto bd = boundary_mask_of(g, in);

    std::vector<WeightedGraph::VertexSpec> vertices;
    std::vector<std::size_t> to_parent;
    std::vector<bool> mask;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!in[i] && !bd[i]) continue;
        vertices.push_back({g.id(i), g.measure(i)});
        to_parent.push_back(i);
        mask.push_back(in[i]);
    }
    std::vector<WeightedGraph::EdgeSpec> edges;
    for (const auto& e : g.edges())
        if (in[e.a] || in[e.b]) edges.push_back({g.id(e.a), g.id(e.b), e.weight});

    try {
        WeightedGraph closure(std::move(vertices), std::move(edges));
        return BoundedSubgraph(g, std::move(closure), std::move(to_parent), std::move(mask));
    } catch (const InvalidInput& err) {
        throw InvalidInput(std::string("closure of the interior is invalid: ") + err.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_number(std::string_view token, std::size_t line_no, std::string_view what) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(line_no, "invalid " + std::string(what) + " '" + std::string(token) + "'");
    return value;
}

}  // namespace

ParsedGraph parse_graph_file(std::string_view text) {
    std::vector<WeightedGraph::VertexSpec> vertices;
    std::vector<WeightedGraph::EdgeSpec> edges;
    std::vector<std::string> marked;
    std::set<std::string> seen_vertices;
    std::set<std::pair<std::string, std::string>> seen_edges;
    std::set<std::string> seen_marks;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = tokenize(line);
        if (tok.empty()) continue;

        if (tok[0] == "v") {
            if (tok.size() != 3) throw ParseError(line_no, "expected 'v <id> <mu>'");
            std::string id(tok[1]);
            double mu = parse_number(tok[2], line_no, "measure");
            if (!seen_vertices.insert(id).second) throw ParseError(line_no, "duplicate vertex '" + id + "'");
            if (!positive_finite(mu)) throw ParseError(line_no, "measure of '" + id + "' must be positive");
            vertices.push_back({std::move(id), mu});
        } else if (tok[0] == "e") {
            if (tok.size() != 4) throw ParseError(line_no, "expected 'e <id1> <id2> <w>'");
            std::string a(tok[1]), b(tok[2]);
            double w = parse_number(tok[3], line_no, "weight");
            if (a == b) throw ParseError(line_no, "self-loop at vertex '" + a + "'");
            if (!seen_vertices.contains(a)) throw ParseError(line_no, "edge references undeclared vertex '" + a + "'");
            if (!seen_vertices.contains(b)) throw ParseError(line_no, "edge references undeclared vertex '" + b + "'");
            if (!positive_finite(w)) throw ParseError(line_no, "weight of {" + a + "," + b + "} must be positive");
            auto k = a < b ? std::pair{a, b} : std::pair{b, a};
            if (!seen_edges.insert(k).second) throw ParseError(line_no, "duplicate edge {" + a + "," + b + "}");
            edges.push_back({std::move(a), std::move(b), w});
        } else if (tok[0] == "b") {
            if (tok.size() != 2) throw ParseError(line_no, "expected 'b <id>'");
            std::string id(tok[1]);
            if (!seen_marks.insert(id).second) throw ParseError(line_no, "vertex '" + id + "' marked twice");
            marked.push_back(std::move(id));
        } else {
            throw ParseError(line_no, "unknown record type '" + std::string(tok[0]) + "'");
        }
    }

    WeightedGraph graph(std::move(vertices), std::move(edges));

    if (!marked.empty()) {
        std::vector<std::string> interior;
        for (auto id : graph.ids())
            if (!seen_marks.contains(id)) interior.push_back(id);
        for (const auto& id : marked)
            if (!graph.index_of(id)) throw InvalidInput("boundary mark references unknown vertex '" + id + "'");
        if (interior.empty()) throw InvalidInput("every vertex is marked as boundary; interior is empty");
        auto derived = vertex_boundary(graph, interior);
        std::set<std::string> derived_set(derived.begin(), derived.end());
        if (derived_set != seen_marks)
            throw InvalidInput("marked boundary does not match the vertex boundary of its complement");
    }
    return {std::move(graph), std::move(marked)};
}

WeightedGraph parse_graph(std::string_view text) { return parse_graph_file(text).graph; }

WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_graph(buf.str());
    } catch (const InvalidInput& err) {
        throw InvalidInput(path + ": " + err.what());
    }
}

std::string serialize_graph(const WeightedGraph& g) {
    std::string out;
    char num[64];
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::snprintf(num, sizeof num, "%.17g", g.measure(i));
        out += "v " + g.id(i) + " " + num + "\n";
    }
    for (const auto& e : g.edges()) {
        std::snprintf(num, sizeof num, "%.17g", e.weight);
        out += "e " + g.id(e.a) + " " + g.id(e.b) + " " + num + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------

std::optional<Topology> topology_from_name(std::string_view name) {
    if (name == "path") return Topology::path;
    if (name == "cycle") return Topology::cycle;
    if (name == "complete") return Topology::complete;
    if (name == "star") return Topology::star;
    if (name == "grid") return Topology::grid;
    return std::nullopt;
}

namespace {

void check_uniform(double weight, double measure) {
    if (!positive_finite(weight)) throw InvalidInput("generator weight must be positive");
    if (!positive_finite(measure)) throw InvalidInput("generator measure must be positive");
}

std::vector<WeightedGraph::VertexSpec> numbered_vertices(std::size_t n, double measure) {
    std::vector<WeightedGraph::VertexSpec> v;
    v.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) v.push_back({std::to_string(i), measure});
    return v;
}

}  // namespace

WeightedGraph generate(Topology kind, std::size_t size, double weight, double measure) {
    if (kind == Topology::grid) throw InvalidInput("grid requires rows and cols; use generate_grid");
    check_uniform(weight, measure);
    std::size_t min_size = kind == Topology::cycle ? 3 : 2;
    if (size < min_size) throw InvalidInput("generator size must be at least " + std::to_string(min_size));

    auto name = [](std::size_t i) { return std::to_string(i); };
    std::vector<WeightedGraph::EdgeSpec> edges;
    switch (kind) {
        case Topology::path:
        case Topology::cycle:
            for (std::size_t i = 1; i < size; ++i) edges.push_back({name(i), name(i + 1), weight});
            if (kind == Topology::cycle) edges.push_back({name(size), name(1), weight});
            break;
        case Topology::complete:
            for (std::size_t i = 1; i <= size; ++i)
                for (std::size_t j = i + 1; j <= size; ++j) edges.push_back({name(i), name(j), weight});
            break;
        case Topology::star:
            for (std::size_t i = 2; i <= size; ++i) edges.push_back({name(1), name(i), weight});
            break;
        case Topology::grid:
            break;
    }
    return WeightedGraph(numbered_vertices(size, measure), std::move(edges));
}

WeightedGraph generate_grid(std::size_t rows, std::size_t cols, double weight, double measure) {
    check_uniform(weight, measure);
    if (rows < 2 || cols < 2) throw InvalidInput("grid dimensions must be at least 2x2");
    auto name = [cols](std::size_t r, std::size_t c) { return std::to_string(r * cols + c + 1); };
    std::vector<WeightedGraph::EdgeSpec> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({name(r, c), name(r, c + 1), weight});
            if (r + 1 < rows) edges.push_back({name(r, c), name(r + 1, c), weight});
        }
    }
    return WeightedGraph(numbered_vertices(rows * cols, measure), std::move(edges));
}

}  // namespace lvg
