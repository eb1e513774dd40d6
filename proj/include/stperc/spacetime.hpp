#pragma once

#include <cstdint>
#include <vector>

#include "stperc/graph.hpp"

namespace stperc {

// Time-boundary condition of a box G x [0,T]. PeriodicOn identifies 0 and T
// only on the lines of a chosen vertex subset.
enum class Boundary { Free, PeriodicAll, PeriodicOn };

class SpaceTimeBox {
  public:
    SpaceTimeBox() = default;
    SpaceTimeBox(Graph graph, double time_length, Boundary boundary);
    // PeriodicOn with an explicit subset of periodic vertices.
    SpaceTimeBox(Graph graph, double time_length, std::vector<uint32_t> periodic_vertices);

    const Graph& graph() const { return graph_; }
    double time_length() const { return time_length_; }
    Boundary boundary() const { return boundary_; }
    bool periodic_line(uint32_t vertex) const;
    const std::vector<uint32_t>& periodic_vertices() const { return periodic_; }

  private:
    Graph graph_;
    double time_length_ = 0.0;
    Boundary boundary_ = Boundary::Free;
    std::vector<uint32_t> periodic_;  // sorted, only for PeriodicOn
};

struct Point {
    uint32_t vertex = 0;
    double time = 0.0;
};

// Checks vertex range and 0 <= time <= T; throws InvalidParameter.
void validate_point(const SpaceTimeBox& box, const Point& p);

// Maps time T to 0 on periodic lines; identity otherwise.
double canonical_time(const SpaceTimeBox& box, uint32_t vertex, double time);

}  // namespace stperc
