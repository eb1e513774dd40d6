#include "stperc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "stperc/errors.hpp"

namespace stperc {

namespace {

constexpr uint32_t kExplicitCompleteCap = 64;

// First edge id of row i in the upper-triangle enumeration of K_n.
uint64_t row_base(uint32_t i, uint32_t n) {
    return static_cast<uint64_t>(i) * (2ull * n - i - 1) / 2;
}

}  // namespace

Graph Graph::from_edges(uint32_t vertices, std::vector<std::pair<uint32_t, uint32_t>> edges) {
    if (vertices == 0) throw InvalidParameter("graph: needs at least one vertex");
    for (auto& [x, y] : edges) {
        if (x >= vertices || y >= vertices)
            throw InvalidParameter("graph: edge endpoint out of range");
        if (x == y) throw InvalidParameter("graph: self-loops are not allowed");
        if (x > y) std::swap(x, y);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw InvalidParameter("graph: duplicate edge");

    Graph g;
    g.n_ = vertices;
    g.edges_ = std::move(edges);
    g.adj_.resize(vertices);
    for (uint64_t e = 0; e < g.edges_.size(); ++e) {
        const auto [x, y] = g.edges_[e];
        g.adj_[x].emplace_back(y, e);
        g.adj_[y].emplace_back(x, e);
    }

    // Connectivity is part of the type's contract.
    std::deque<uint32_t> queue{0};
    std::vector<char> seen(vertices, 0);
    seen[0] = 1;
    uint32_t reached = 1;
    while (!queue.empty()) {
        const uint32_t v = queue.front();
        queue.pop_front();
        for (const auto& [w, e] : g.adj_[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    if (reached != vertices) throw InvalidParameter("graph: must be connected");
    return g;
}

Graph Graph::single_vertex() { return from_edges(1, {}); }

Graph Graph::path(uint32_t vertices) {
    if (vertices == 0) throw InvalidParameter("graph: needs at least one vertex");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i + 1 < vertices; ++i) edges.emplace_back(i, i + 1);
    return from_edges(vertices, std::move(edges));
}

Graph Graph::cycle(uint32_t vertices) {
    if (vertices < 3) throw InvalidParameter("graph: a cycle needs at least three vertices");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i + 1 < vertices; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, vertices - 1);
    return from_edges(vertices, std::move(edges));
}

Graph Graph::complete(uint32_t vertices) {
    if (vertices == 0) throw InvalidParameter("graph: needs at least one vertex");
    if (vertices <= kExplicitCompleteCap) {
        std::vector<std::pair<uint32_t, uint32_t>> edges;
        for (uint32_t i = 0; i < vertices; ++i)
            for (uint32_t j = i + 1; j < vertices; ++j) edges.emplace_back(i, j);
        Graph g = from_edges(vertices, std::move(edges));
        g.complete_ = true;
        return g;
    }
    Graph g;
    g.n_ = vertices;
    g.complete_ = true;
    return g;
}

uint64_t Graph::edge_count() const {
    if (complete_ && edges_.empty())
        return static_cast<uint64_t>(n_) * (n_ - 1) / 2;
    return edges_.size();
}

std::pair<uint32_t, uint32_t> Graph::edge_endpoints(uint64_t edge) const {
    if (edge >= edge_count()) throw InvalidParameter("graph: edge id out of range");
    if (!edges_.empty()) return edges_[edge];
    // Invert the triangular enumeration: find the row, then the column.
    const double nf = static_cast<double>(n_);
    const double ef = static_cast<double>(edge);
    const double disc = (nf - 0.5) * (nf - 0.5) - 2.0 * ef;
    uint32_t i = static_cast<uint32_t>(std::max(0.0, nf - 0.5 - std::sqrt(std::max(0.0, disc))));
    while (i > 0 && row_base(i, n_) > edge) --i;
    while (row_base(i + 1, n_) <= edge) ++i;
    const uint32_t j = i + 1 + static_cast<uint32_t>(edge - row_base(i, n_));
    return {i, j};
}

uint64_t Graph::edge_id(uint32_t x, uint32_t y) const {
    if (x >= n_ || y >= n_ || x == y) throw InvalidParameter("graph: bad edge endpoints");
    if (x > y) std::swap(x, y);
    if (edges_.empty() && complete_) return row_base(x, n_) + (y - x - 1);
    if (complete_) return row_base(x, n_) + (y - x - 1);
    for (const auto& [w, e] : adj_[x])
        if (w == y) return e;
    throw InvalidParameter("graph: no such edge");
}

bool Graph::has_edge(uint32_t x, uint32_t y) const {
    if (x >= n_ || y >= n_ || x == y) return false;
    if (complete_) return true;
    if (x > y) std::swap(x, y);
    for (const auto& [w, e] : adj_[x])
        if (w == y) return true;
    return false;
}

const std::vector<std::vector<std::pair<uint32_t, uint64_t>>>& Graph::adjacency() const {
    if (complete_ && edges_.empty())
        throw CapacityError("graph: adjacency is not materialized for complete graphs with " +
                            std::to_string(n_) + " vertices");
    return adj_;
}

std::vector<uint32_t> Graph::bfs_distances(uint32_t source) const {
    if (source >= n_) throw InvalidParameter("graph: source out of range");
    if (complete_) {
        std::vector<uint32_t> d(n_, 1);
        d[source] = 0;
        return d;
    }
    std::vector<uint32_t> d(n_, std::numeric_limits<uint32_t>::max());
    d[source] = 0;
    std::deque<uint32_t> queue{source};
    while (!queue.empty()) {
        const uint32_t v = queue.front();
        queue.pop_front();
        for (const auto& [w, e] : adj_[v]) {
            if (d[w] == std::numeric_limits<uint32_t>::max()) {
                d[w] = d[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return d;
}

}  // namespace stperc
