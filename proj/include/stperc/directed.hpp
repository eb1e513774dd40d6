#pragma once

#include <cstdint>
#include <vector>

#include "stperc/configuration.hpp"
#include "stperc/spacetime.hpp"

namespace stperc {

// Portion of one line covered by time-increasing paths: times
// {entry + u mod T : u in [0, length]} on the given vertex.
struct ReachPiece {
    uint32_t vertex = 0;
    double entry = 0.0;
    double length = 0.0;
    bool full_circle = false;
};

// Forward cluster of an origin point in a directed configuration.
struct DirectedReach {
    Point origin;
    double time_length = 0.0;
    std::vector<ReachPiece> pieces;  // sorted by (vertex, entry)
    double total_measure = 0.0;
    double radius = 0.0;        // max graph distance + |t - origin.time|
    double space_extent = 0.0;
    double time_extent = 0.0;

    bool covers(uint32_t vertex, double t) const;
};

// All points reachable from the origin along paths that move forward in time
// within lines (wrapping on periodic lines, stopping at cuts) and jump along
// directed bridges. Requires a configuration sampled in directed mode and a
// Free or PeriodicAll box.
DirectedReach directed_reach(const Configuration& config, const SpaceTimeBox& box, Point origin);

}  // namespace stperc
