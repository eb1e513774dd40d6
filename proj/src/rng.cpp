#include "stperc/rng.hpp"

#include <cmath>

#include "stperc/errors.hpp"

namespace stperc {

namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Stafford mix 13).
uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

uint64_t combine(uint64_t h, uint64_t v) { return mix64(h ^ mix64(v + kGolden)); }

}  // namespace

RngStream::RngStream(uint64_t seed, StreamPurpose purpose, uint64_t entity, uint64_t replica) {
    uint64_t h = mix64(seed + kGolden);
    h = combine(h, static_cast<uint64_t>(purpose));
    h = combine(h, entity);
    h = combine(h, replica);
    key_ = h;
}

RngStream RngStream::restore(uint64_t key, uint64_t counter) {
    RngStream s;
    s.key_ = key;
    s.counter_ = counter;
    return s;
}

uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::next_unit_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

uint64_t RngStream::next_below(uint64_t bound) {
    if (bound == 0) throw InvalidParameter("next_below: bound must be positive");
    if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
    // Rejection from the largest multiple of bound below 2^64.
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

double RngStream::next_exp(double rate) {
    if (!(rate > 0.0)) throw InvalidParameter("next_exp: rate must be positive");
    return -std::log(next_unit_pos()) / rate;
}

double RngStream::next_gaussian() {
    const double u = next_unit_pos();
    const double v = next_unit();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
}

uint64_t RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw InvalidParameter("next_poisson: mean must be non-negative");
    uint64_t total = 0;
    // Split large means by additivity so the product method stays exact.
    while (mean > 30.0) {
        const double half = mean * 0.5;
        total += next_poisson(half);
        mean -= half;
    }
    if (mean == 0.0) return total;
    const double threshold = std::exp(-mean);
    double prod = 1.0;
    uint64_t k = 0;
    for (;;) {
        prod *= next_unit_pos();
        if (prod <= threshold) break;
        ++k;
    }
    return total + k;
}

std::vector<double> sample_poisson_times(double rate, double length, RngStream& stream) {
    if (!(rate >= 0.0)) throw InvalidParameter("sample_poisson_times: rate must be non-negative");
    if (!(length > 0.0)) throw InvalidParameter("sample_poisson_times: length must be positive");
    std::vector<double> times;
    if (rate == 0.0) return times;
    double t = 0.0;
    for (;;) {
        double gap = stream.next_exp(rate);
        double next = t + gap;
        // Guard against gaps below floating-point resolution at t.
        while (next <= t) {
            gap = stream.next_exp(rate);
            next = t + gap;
        }
        if (next >= length) break;
        times.push_back(next);
        t = next;
    }
    return times;
}

}  // namespace stperc
