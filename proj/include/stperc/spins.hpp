#pragma once

#include <cstdint>
#include <vector>

#include "stperc/clusters.hpp"
#include "stperc/graph.hpp"
#include "stperc/rng.hpp"

namespace stperc {

// One constant-spin piece of a line; geometry mirrors Segment.
struct SpinPiece {
    double start = 0.0;
    double length = 0.0;
    bool wraps = false;
    bool full_circle = false;
    uint32_t spin = 0;
};

// Piecewise-constant spin function on the lines of a box, with values in
// {0..q-1}. Pieces partition each line and are ordered by start time, the
// wrapping piece of a periodic line last.
struct SpinField {
    uint32_t q = 1;
    double time_length = 0.0;
    std::vector<std::vector<SpinPiece>> lines;

    // Right-continuous lookup; t = T reads back the t = 0 value on wrapped
    // lines and the final piece on free lines.
    uint32_t spin_at(uint32_t vertex, double t) const;
};

// Independent uniform spin per cluster; the field is constant on clusters and
// its pieces coincide with the cluster segments. q = 1 consumes no
// randomness.
SpinField color_clusters(const ClusterLabeling& labeling, uint32_t q, RngStream& stream);

struct SpinDensityStats {
    // Total Lebesgue measure, over edges, of {t: spins at the endpoints agree}.
    double agreement_measure = 0.0;
    // Number of spin jumps across all lines (boundaries with unequal spins).
    uint64_t jump_count = 0;
};

SpinDensityStats spin_density_stats(const SpinField& field, const Graph& graph);

}  // namespace stperc
