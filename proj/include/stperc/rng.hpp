#pragma once

#include <cstdint>
#include <vector>

namespace stperc {

// Purpose tags keep the random streams of unrelated sampling tasks disjoint.
enum class StreamPurpose : uint64_t {
    Cuts = 1,
    Bridges = 2,
    Coloring = 3,
    Chain = 4,
    Environment = 5,
    Estimator = 6,
    Marks = 7,
    Generic = 8,
};

// Counter-based splittable generator. A stream is identified by the tuple
// (seed, purpose, entity, replica); draws are a pure function of the derived
// key and a running counter, so any stream can be reconstructed or resumed
// exactly from (key, counter).
class RngStream {
  public:
    RngStream() = default;
    RngStream(uint64_t seed, StreamPurpose purpose, uint64_t entity = 0, uint64_t replica = 0);

    static RngStream restore(uint64_t key, uint64_t counter);

    uint64_t key() const { return key_; }
    uint64_t counter() const { return counter_; }

    uint64_t next_u64();
    // Uniform on [0,1), 53-bit resolution.
    double next_unit();
    // Uniform on (0,1]; never returns 0, safe for logarithms.
    double next_unit_pos();
    // Uniform integer in [0, bound), bound >= 1.
    uint64_t next_below(uint64_t bound);
    // Exponential with the given rate > 0.
    double next_exp(double rate);
    // Standard normal (Box-Muller, no cached spare so state is just the counter).
    double next_gaussian();
    // Poisson count; exact for all means via product method plus additivity.
    uint64_t next_poisson(double mean);

  private:
    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

// Sorted point process times in (0, length): successive exponential(rate) gaps.
// rate == 0 yields an empty set. Times are strictly increasing; in the
// (measure-zero, floating-point) event that a gap underflows, the gap is
// redrawn so no duplicate times are emitted.
std::vector<double> sample_poisson_times(double rate, double length, RngStream& stream);

}  // namespace stperc
