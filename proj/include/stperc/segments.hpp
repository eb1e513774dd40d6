#pragma once

#include <cstdint>
#include <vector>

#include "stperc/configuration.hpp"
#include "stperc/spacetime.hpp"

namespace stperc {

// Maximal cut-free interval of a line. start lies in [0,T); wrapping segments
// cross the 0/T identification of a periodic line; a full circle is a
// periodic line without cuts. Intervals are half-open [start, start+length)
// in circular arithmetic, except that on a free line the final segment also
// contains the endpoint T.
struct Segment {
    uint32_t vertex = 0;
    double start = 0.0;
    double length = 0.0;
    bool wraps = false;
    bool full_circle = false;
};

// All segments of a configuration, grouped by line and ordered by start time.
class SegmentSet {
  public:
    SegmentSet() = default;
    SegmentSet(const Configuration& config, const SpaceTimeBox& box);

    uint32_t size() const { return static_cast<uint32_t>(segments_.size()); }
    const Segment& operator[](uint32_t i) const { return segments_[i]; }
    double time_length() const { return time_length_; }

    uint32_t line_begin(uint32_t vertex) const { return begin_[vertex]; }
    uint32_t line_end(uint32_t vertex) const { return begin_[vertex + 1]; }

    // Segment containing (vertex, t); right-continuous, so a cut time belongs
    // to the segment starting there. t = T on a periodic line is t = 0.
    uint32_t locate(uint32_t vertex, double t) const;

    // Largest |t - s| over the closure of segment i.
    double max_abs_offset(uint32_t i, double s) const;

    // Offset of time t inside segment i, in circular arithmetic from start.
    double offset_in(uint32_t i, double t) const;

  private:
    std::vector<Segment> segments_;
    std::vector<uint32_t> begin_;
    double time_length_ = 0.0;
};

}  // namespace stperc
