#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "stperc/environment.hpp"
#include "stperc/graph.hpp"
#include "stperc/rng.hpp"
#include "stperc/spacetime.hpp"

namespace stperc {

// A realization of the cut and bridge point processes on a box. Cut times are
// strictly increasing within a line and lie in (0,T). Bridge lists are keyed
// by edge id; in directed mode by 2*edge + orientation, where orientation 0
// points from the smaller to the larger endpoint. No bridge time coincides
// exactly with a cut time on either endpoint line.
struct Configuration {
    uint32_t vertex_count = 0;
    bool directed = false;
    std::vector<std::vector<double>> cuts;
    std::map<uint64_t, std::vector<double>> bridges;

    uint64_t total_cuts() const;
    uint64_t total_bridges() const;
};

// Visits every bridge as (x, y, t) with x < y, ignoring orientation.
template <typename F>
void for_each_bridge(const Configuration& c, const Graph& g, F&& f) {
    for (const auto& [key, times] : c.bridges) {
        const uint64_t edge = c.directed ? key / 2 : key;
        const auto [x, y] = g.edge_endpoints(edge);
        for (double t : times) f(x, y, t);
    }
}

// Visits every directed bridge as (from, to, t); requires directed mode.
template <typename F>
void for_each_directed_bridge(const Configuration& c, const Graph& g, F&& f) {
    for (const auto& [key, times] : c.bridges) {
        const auto [x, y] = g.edge_endpoints(key / 2);
        const uint32_t from = (key & 1) == 0 ? x : y;
        const uint32_t to = (key & 1) == 0 ? y : x;
        for (double t : times) f(from, to, t);
    }
}

// Independent Poisson processes: one cut process per line, one bridge process
// per edge (per ordered pair in directed mode). Exact bridge/cut time
// collisions are resolved by redrawing the affected edge.
Configuration sample_configuration(const SpaceTimeBox& box, const IntensityEnvironment& env,
                                   uint64_t seed, uint64_t replica = 0, bool directed = false);

// Coupled family sharing one cut realization: bridges are sampled once at the
// envelope rate and thinned with common uniform marks, so factor f1 <= f2
// implies the f1 bridge set is contained in the f2 set. Factors lie in [0,1].
std::vector<Configuration> sample_thinned_family(const SpaceTimeBox& box,
                                                 const IntensityEnvironment& env,
                                                 std::span<const double> bridge_factors,
                                                 uint64_t seed, uint64_t replica = 0);

// Diffusive time change t -> factor * t: returns the rescaled configuration
// and box. Event rates transform as (lambda, delta) -> (lambda, delta)/factor.
std::pair<Configuration, SpaceTimeBox> rescale_time(const Configuration& config,
                                                    const SpaceTimeBox& box, double factor);

// Structural checks (ordering, ranges, collision-freeness); CorruptState on
// violation.
void validate_configuration(const Configuration& config, const SpaceTimeBox& box);

}  // namespace stperc
