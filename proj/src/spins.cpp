#include "stperc/spins.hpp"

#include <algorithm>
#include <cmath>

#include "stperc/errors.hpp"

namespace stperc {

uint32_t SpinField::spin_at(uint32_t vertex, double t) const {
    if (vertex >= lines.size()) throw InvalidParameter("spin field: vertex out of range");
    if (!(t >= 0.0) || !(t <= time_length))
        throw InvalidParameter("spin field: time outside [0, T]");
    const auto& pieces = lines[vertex];
    if (pieces.empty()) throw CorruptState("spin field: line without pieces");
    if (pieces.size() == 1) return pieces[0].spin;
    // Last piece with start <= t; earlier times fall into the wrapping piece.
    size_t lo = 0, hi = pieces.size();
    while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        if (pieces[mid].start <= t)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == 0) {
        if (!pieces.back().wraps) throw CorruptState("spin field: uncovered time on a free line");
        return pieces.back().spin;
    }
    return pieces[lo - 1].spin;
}

SpinField color_clusters(const ClusterLabeling& labeling, uint32_t q, RngStream& stream) {
    if (q < 1) throw InvalidParameter("color_clusters: q must be at least 1");
    std::vector<uint32_t> color(labeling.cluster_count, 0);
    if (q > 1)
        for (uint32_t c = 0; c < labeling.cluster_count; ++c)
            color[c] = static_cast<uint32_t>(stream.next_below(q));

    const SegmentSet& segs = labeling.segments;
    SpinField field;
    field.q = q;
    field.time_length = segs.time_length();
    const uint32_t n_lines =
        segs.size() == 0 ? 0 : segs[segs.size() - 1].vertex + 1;
    field.lines.resize(n_lines);
    for (uint32_t i = 0; i < segs.size(); ++i) {
        const Segment& s = segs[i];
        field.lines[s.vertex].push_back(
            {s.start, s.length, s.wraps, s.full_circle, color[labeling.label[i]]});
    }
    return field;
}

namespace {

// Linear view of a line as (start, spin) boundaries covering [0,T): the
// wrapping piece contributes its head [start,T) and its tail [0,end).
std::vector<std::pair<double, uint32_t>> linearize(const std::vector<SpinPiece>& pieces,
                                                   double T) {
    std::vector<std::pair<double, uint32_t>> out;
    for (const SpinPiece& p : pieces) {
        if (!p.wraps) {
            out.emplace_back(p.start, p.spin);
        } else {
            const double tail = p.length - (T - p.start);
            if (tail > 0.0) out.emplace_back(0.0, p.spin);
            out.emplace_back(p.start, p.spin);
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty() || out.front().first != 0.0)
        throw CorruptState("spin field: line does not cover time 0");
    return out;
}

}  // namespace

SpinDensityStats spin_density_stats(const SpinField& field, const Graph& graph) {
    if (field.lines.size() != graph.vertex_count())
        throw InvalidParameter("spin_density_stats: field does not match graph");
    const double T = field.time_length;

    std::vector<std::vector<std::pair<double, uint32_t>>> lin(field.lines.size());
    for (size_t v = 0; v < field.lines.size(); ++v) lin[v] = linearize(field.lines[v], T);

    // Jumps sit at piece boundaries strictly inside (0,T). The identification
    // point of a periodic line is interior to its wrapping piece and so never
    // jumps for fields whose pieces mirror cluster segments.
    SpinDensityStats stats;
    for (const auto& line : lin)
        for (size_t i = 1; i < line.size(); ++i)
            if (line[i].second != line[i - 1].second) ++stats.jump_count;

    const uint64_t m = graph.edge_count();
    for (uint64_t e = 0; e < m; ++e) {
        const auto [x, y] = graph.edge_endpoints(e);
        const auto& a = lin[x];
        const auto& b = lin[y];
        size_t i = 0, j = 0;
        double t = 0.0;
        while (t < T) {
            const double next_a = i + 1 < a.size() ? a[i + 1].first : T;
            const double next_b = j + 1 < b.size() ? b[j + 1].first : T;
            const double next = std::min(next_a, next_b);
            if (a[i].second == b[j].second) stats.agreement_measure += next - t;
            t = next;
            if (next == next_a && i + 1 < a.size()) ++i;
            if (next == next_b && j + 1 < b.size()) ++j;
        }
    }
    return stats;
}

}  // namespace stperc
