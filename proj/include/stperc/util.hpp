#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace stperc {

// Shortest round-trip-safe decimal rendering (17 significant digits).
std::string format_double(double x);

// Strict double parser: the whole token must be consumed.
double parse_double(std::string_view token);

// SHA-1 digest as a lowercase hex string.
std::string sha1_hex(std::string_view data);

// Runs body(i) for i in [0, count). With workers <= 1 the loop is sequential;
// otherwise indices are distributed over a thread pool. Results must be
// written to per-index slots so aggregation order stays deterministic.
void parallel_for(uint64_t count, int workers, const std::function<void(uint64_t)>& body);

}  // namespace stperc
