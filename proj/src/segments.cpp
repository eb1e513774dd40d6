#include "stperc/segments.hpp"

#include <algorithm>
#include <cmath>

#include "stperc/errors.hpp"

namespace stperc {

SegmentSet::SegmentSet(const Configuration& config, const SpaceTimeBox& box) {
    const uint32_t n = box.graph().vertex_count();
    const double T = box.time_length();
    if (config.cuts.size() != n) throw CorruptState("segments: cut table size mismatch");
    time_length_ = T;
    begin_.resize(n + 1, 0);
    for (uint32_t v = 0; v < n; ++v) {
        begin_[v] = static_cast<uint32_t>(segments_.size());
        const auto& cuts = config.cuts[v];
        const bool periodic = box.periodic_line(v);
        if (cuts.empty()) {
            segments_.push_back({v, 0.0, T, false, periodic});
        } else if (periodic) {
            for (size_t i = 0; i + 1 < cuts.size(); ++i)
                segments_.push_back({v, cuts[i], cuts[i + 1] - cuts[i], false, false});
            segments_.push_back({v, cuts.back(), (T - cuts.back()) + cuts.front(), true, false});
        } else {
            segments_.push_back({v, 0.0, cuts.front(), false, false});
            for (size_t i = 0; i + 1 < cuts.size(); ++i)
                segments_.push_back({v, cuts[i], cuts[i + 1] - cuts[i], false, false});
            segments_.push_back({v, cuts.back(), T - cuts.back(), false, false});
        }
    }
    begin_[n] = static_cast<uint32_t>(segments_.size());
}

uint32_t SegmentSet::locate(uint32_t vertex, double t) const {
    if (vertex + 1 >= begin_.size()) throw InvalidParameter("segments: vertex out of range");
    if (!(t >= 0.0) || !(t <= time_length_))
        throw InvalidParameter("segments: time outside [0, T]");
    const uint32_t b = begin_[vertex];
    const uint32_t e = begin_[vertex + 1];
    if (e - b == 1) return b;
    // Last segment whose start is <= t; before the first cut the point lies
    // in the wrapping segment of a periodic line.
    uint32_t lo = b, hi = e;
    while (lo < hi) {
        const uint32_t mid = lo + (hi - lo) / 2;
        if (segments_[mid].start <= t)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == b) {
        const Segment& last = segments_[e - 1];
        if (!last.wraps) throw CorruptState("segments: uncovered time on a free line");
        return e - 1;
    }
    return lo - 1;
}

double SegmentSet::max_abs_offset(uint32_t i, double s) const {
    const Segment& seg = segments_[i];
    const double T = time_length_;
    if (seg.full_circle) return std::max(s, T - s);
    if (!seg.wraps) {
        const double a = seg.start;
        const double b = seg.start + seg.length;
        return std::max(std::fabs(a - s), std::fabs(b - s));
    }
    // Closure pieces [start, T] and [0, end2] with end2 = start + length - T.
    const double end2 = seg.length - (T - seg.start);
    double m = std::fabs(seg.start - s);
    m = std::max(m, std::fabs(T - s));
    m = std::max(m, s);
    m = std::max(m, std::fabs(end2 - s));
    return m;
}

double SegmentSet::offset_in(uint32_t i, double t) const {
    const Segment& seg = segments_[i];
    double u = t - seg.start;
    if (u < 0.0) u += time_length_;
    return u;
}

}  // namespace stperc
