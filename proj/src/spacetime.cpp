#include "stperc/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "stperc/errors.hpp"

namespace stperc {

namespace {

void check_time_length(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidParameter("box: time length must be positive and finite");
}

}  // namespace

SpaceTimeBox::SpaceTimeBox(Graph graph, double time_length, Boundary boundary)
    : graph_(std::move(graph)), time_length_(time_length), boundary_(boundary) {
    check_time_length(time_length_);
    if (boundary_ == Boundary::PeriodicOn)
        throw InvalidParameter("box: PeriodicOn requires an explicit vertex subset");
}

SpaceTimeBox::SpaceTimeBox(Graph graph, double time_length,
                           std::vector<uint32_t> periodic_vertices)
    : graph_(std::move(graph)),
      time_length_(time_length),
      boundary_(Boundary::PeriodicOn),
      periodic_(std::move(periodic_vertices)) {
    check_time_length(time_length_);
    std::sort(periodic_.begin(), periodic_.end());
    if (std::adjacent_find(periodic_.begin(), periodic_.end()) != periodic_.end())
        throw InvalidParameter("box: duplicate vertex in periodic set");
    for (uint32_t v : periodic_)
        if (v >= graph_.vertex_count())
            throw InvalidParameter("box: periodic vertex out of range");
}

bool SpaceTimeBox::periodic_line(uint32_t vertex) const {
    switch (boundary_) {
        case Boundary::Free:
            return false;
        case Boundary::PeriodicAll:
            return true;
        case Boundary::PeriodicOn:
            return std::binary_search(periodic_.begin(), periodic_.end(), vertex);
    }
    return false;
}

void validate_point(const SpaceTimeBox& box, const Point& p) {
    if (p.vertex >= box.graph().vertex_count())
        throw InvalidParameter("point: vertex out of range");
    if (!(p.time >= 0.0) || !(p.time <= box.time_length()))
        throw InvalidParameter("point: time outside [0, T]");
}

double canonical_time(const SpaceTimeBox& box, uint32_t vertex, double time) {
    if (time == box.time_length() && box.periodic_line(vertex)) return 0.0;
    return time;
}

}  // namespace stperc
