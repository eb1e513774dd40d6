#pragma once

#include <cstdint>
#include <vector>

#include "stperc/configuration.hpp"
#include "stperc/segments.hpp"
#include "stperc/spacetime.hpp"

namespace stperc {

class UnionFind {
  public:
    explicit UnionFind(uint32_t n);
    uint32_t find(uint32_t x);
    // Returns true when two distinct sets were merged.
    bool unite(uint32_t a, uint32_t b);

  private:
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> size_;
};

// Partition of the segments into connected clusters. Labels are contiguous
// and ordered by first appearance in segment order.
struct ClusterLabeling {
    SegmentSet segments;
    std::vector<uint32_t> label;    // per segment
    uint32_t cluster_count = 0;
    std::vector<double> measure;    // per cluster, total time length

    uint32_t label_at(uint32_t vertex, double t) const;
};

// Merges the two endpoint segments of every bridge. A bridge exactly on a cut
// time is treated as corrupt input.
ClusterLabeling build_clusters(const Configuration& config, const SpaceTimeBox& box);

struct ClusterInfo {
    uint32_t label = 0;
    double measure = 0.0;
    // max over cluster points of graph distance from the origin vertex plus
    // absolute time offset from the origin time
    double radius = 0.0;
    double space_extent = 0.0;  // max graph distance alone
    double time_extent = 0.0;   // max absolute time offset alone
    uint32_t segment_count = 0;
};

ClusterInfo cluster_at(const ClusterLabeling& labeling, const SpaceTimeBox& box, Point origin);

}  // namespace stperc
