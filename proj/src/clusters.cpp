#include "stperc/clusters.hpp"

#include <algorithm>
#include <limits>

#include "stperc/errors.hpp"

namespace stperc {

UnionFind::UnionFind(uint32_t n) : parent_(n), size_(n, 1) {
    for (uint32_t i = 0; i < n; ++i) parent_[i] = i;
}

uint32_t UnionFind::find(uint32_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];  // path halving
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(uint32_t a, uint32_t b) {
    uint32_t ra = find(a);
    uint32_t rb = find(b);
    if (ra == rb) return false;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    return true;
}

uint32_t ClusterLabeling::label_at(uint32_t vertex, double t) const {
    return label[segments.locate(vertex, t)];
}

ClusterLabeling build_clusters(const Configuration& config, const SpaceTimeBox& box) {
    ClusterLabeling out;
    out.segments = SegmentSet(config, box);
    const uint32_t n_seg = out.segments.size();

    UnionFind uf(n_seg);
    for_each_bridge(config, box.graph(), [&](uint32_t x, uint32_t y, double t) {
        // locate() maps a cut time to the segment starting there, which would
        // silently misattach the lower end; such input is corrupt instead.
        if (std::binary_search(config.cuts[x].begin(), config.cuts[x].end(), t) ||
            std::binary_search(config.cuts[y].begin(), config.cuts[y].end(), t))
            throw CorruptState("build_clusters: bridge coincides with a cut");
        uf.unite(out.segments.locate(x, t), out.segments.locate(y, t));
    });

    out.label.assign(n_seg, std::numeric_limits<uint32_t>::max());
    std::vector<uint32_t> root_label(n_seg, std::numeric_limits<uint32_t>::max());
    uint32_t next = 0;
    for (uint32_t i = 0; i < n_seg; ++i) {
        const uint32_t r = uf.find(i);
        if (root_label[r] == std::numeric_limits<uint32_t>::max()) root_label[r] = next++;
        out.label[i] = root_label[r];
    }
    out.cluster_count = next;
    out.measure.assign(next, 0.0);
    for (uint32_t i = 0; i < n_seg; ++i) out.measure[out.label[i]] += out.segments[i].length;
    return out;
}

ClusterInfo cluster_at(const ClusterLabeling& labeling, const SpaceTimeBox& box, Point origin) {
    validate_point(box, origin);
    const double s = origin.time;
    const uint32_t target =
        labeling.label_at(origin.vertex, canonical_time(box, origin.vertex, s));

    const std::vector<uint32_t> dist = box.graph().bfs_distances(origin.vertex);

    ClusterInfo info;
    info.label = target;
    info.measure = labeling.measure[target];
    for (uint32_t i = 0; i < labeling.segments.size(); ++i) {
        if (labeling.label[i] != target) continue;
        ++info.segment_count;
        const double d = static_cast<double>(dist[labeling.segments[i].vertex]);
        const double dt = labeling.segments.max_abs_offset(i, s);
        info.space_extent = std::max(info.space_extent, d);
        info.time_extent = std::max(info.time_extent, dt);
        info.radius = std::max(info.radius, d + dt);
    }
    return info;
}

}  // namespace stperc
