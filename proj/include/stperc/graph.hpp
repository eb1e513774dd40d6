#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace stperc {

// Finite simple connected graph. Edges carry stable ids: for explicit edge
// lists the position in the (normalized, sorted) list; for the complete form
// the row-major upper-triangle index. complete(n) keeps an explicit edge list
// up to n = 64 so adjacency stays available for small instances; larger
// complete graphs are stored implicitly and never materialize their edges.
class Graph {
  public:
    Graph() = default;

    static Graph from_edges(uint32_t vertices,
                            std::vector<std::pair<uint32_t, uint32_t>> edges);
    static Graph single_vertex();
    static Graph path(uint32_t vertices);
    static Graph cycle(uint32_t vertices);
    static Graph complete(uint32_t vertices);

    uint32_t vertex_count() const { return n_; }
    uint64_t edge_count() const;
    bool complete_form() const { return complete_; }

    std::pair<uint32_t, uint32_t> edge_endpoints(uint64_t edge) const;
    uint64_t edge_id(uint32_t x, uint32_t y) const;
    bool has_edge(uint32_t x, uint32_t y) const;

    // Per-vertex (neighbor, edge id) lists; unavailable for implicit complete
    // graphs (CapacityError).
    const std::vector<std::vector<std::pair<uint32_t, uint64_t>>>& adjacency() const;

    // Hop distances from source to every vertex.
    std::vector<uint32_t> bfs_distances(uint32_t source) const;

  private:
    uint32_t n_ = 0;
    bool complete_ = false;
    std::vector<std::pair<uint32_t, uint32_t>> edges_;
    std::vector<std::vector<std::pair<uint32_t, uint64_t>>> adj_;
};

}  // namespace stperc
