#include "stperc/directed.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "stperc/errors.hpp"
#include "stperc/segments.hpp"

namespace stperc {

namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();

double piece_max_abs_offset(const ReachPiece& p, bool wraps, double s, double T) {
    if (p.full_circle) return std::max(s, T - s);
    if (!wraps) {
        const double end = std::min(p.entry + p.length, T);
        return std::max(std::fabs(p.entry - s), std::fabs(end - s));
    }
    // Closure pieces [entry, T] and [0, end2].
    const double end2 = p.entry + p.length - T;
    double m = std::fabs(p.entry - s);
    m = std::max(m, std::fabs(T - s));
    m = std::max(m, s);
    m = std::max(m, std::fabs(end2 - s));
    return m;
}

}  // namespace

bool DirectedReach::covers(uint32_t vertex, double t) const {
    if (vertex == origin.vertex && t == origin.time) return true;
    for (const ReachPiece& p : pieces) {
        if (p.vertex != vertex) continue;
        if (p.full_circle) return true;
        double u = t - p.entry;
        if (u < 0.0) u += time_length;
        if (u >= 0.0 && u < p.length) return true;
    }
    return false;
}

DirectedReach directed_reach(const Configuration& config, const SpaceTimeBox& box, Point origin) {
    if (!config.directed)
        throw InvalidParameter("directed_reach: configuration was not sampled in directed mode");
    if (box.boundary() == Boundary::PeriodicOn)
        throw InvalidParameter("directed_reach: box must be Free or PeriodicAll");
    validate_point(box, origin);

    const Graph& g = box.graph();
    const double T = box.time_length();
    SegmentSet segs(config, box);

    // Outgoing directed bridges grouped by source vertex.
    std::vector<std::vector<std::pair<double, uint32_t>>> out(g.vertex_count());
    for_each_directed_bridge(config, g, [&](uint32_t from, uint32_t to, double t) {
        out[from].emplace_back(t, to);
    });

    std::vector<double> best(segs.size(), kUnreached);
    std::deque<uint32_t> queue;
    std::vector<char> queued(segs.size(), 0);

    auto enter = [&](uint32_t vertex, double t) {
        const uint32_t i = segs.locate(vertex, canonical_time(box, vertex, t));
        // Entering a cut-free circle covers it entirely.
        const double u = segs[i].full_circle ? 0.0 : segs.offset_in(i, t);
        if (u < best[i]) {
            best[i] = u;
            if (!queued[i]) {
                queued[i] = 1;
                queue.push_back(i);
            }
        }
    };

    enter(origin.vertex, origin.time);
    while (!queue.empty()) {
        const uint32_t i = queue.front();
        queue.pop_front();
        queued[i] = 0;
        const uint32_t v = segs[i].vertex;
        for (const auto& [t, target] : out[v]) {
            if (segs.locate(v, t) != i) continue;
            if (segs.offset_in(i, t) < best[i]) continue;  // before the entry point
            enter(target, t);
        }
    }

    DirectedReach reach;
    reach.origin = origin;
    reach.time_length = T;
    const std::vector<uint32_t> dist = g.bfs_distances(origin.vertex);
    for (uint32_t i = 0; i < segs.size(); ++i) {
        if (best[i] == kUnreached) continue;
        const Segment& seg = segs[i];
        ReachPiece p;
        p.vertex = seg.vertex;
        p.full_circle = seg.full_circle;
        p.length = seg.length - best[i];
        const double entry_raw = seg.start + best[i];
        // The piece crosses the 0/T identification only when its segment
        // wraps and the entry point still lies before T.
        const bool wraps = seg.wraps && entry_raw < T;
        p.entry = seg.full_circle ? 0.0 : (entry_raw >= T ? entry_raw - T : entry_raw);
        reach.pieces.push_back(p);
        reach.total_measure += p.length;

        const double d = static_cast<double>(dist[seg.vertex]);
        const double dt = piece_max_abs_offset(p, wraps, origin.time, T);
        reach.space_extent = std::max(reach.space_extent, d);
        reach.time_extent = std::max(reach.time_extent, dt);
        reach.radius = std::max(reach.radius, d + dt);
    }
    std::sort(reach.pieces.begin(), reach.pieces.end(),
              [](const ReachPiece& a, const ReachPiece& b) {
                  return a.vertex != b.vertex ? a.vertex < b.vertex : a.entry < b.entry;
              });
    return reach;
}

}  // namespace stperc
