#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stperc/clusters.hpp"
#include "stperc/directed.hpp"
#include "stperc/environment.hpp"
#include "stperc/spacetime.hpp"
#include "stperc/stats.hpp"

namespace stperc {

// Size, radius and extent statistics of the origin cluster of one sample.
struct TrialStats {
    double measure = 0.0;
    double radius = 0.0;
    double space_extent = 0.0;
    double time_extent = 0.0;
};

TrialStats origin_cluster_stats(const SpaceTimeBox& box, const IntensityEnvironment& env,
                                Point origin, uint64_t seed, uint64_t replica, bool directed);

struct SurvivalCell {
    double threshold = 0.0;
    uint64_t trials = 0;
    uint64_t successes = 0;
    double frequency = 0.0;
    double stderr_freq = 0.0;
};

// Monte Carlo estimate of P(rad(C) >= R) over independent replicas, for
// several thresholds from the same trials. Thresholds a cluster inside the
// box can never reach are rejected.
std::vector<SurvivalCell> radius_survival_curve(const SpaceTimeBox& box,
                                                const IntensityEnvironment& env, Point origin,
                                                std::span<const double> radii, uint64_t trials,
                                                uint64_t seed, bool directed = false,
                                                int workers = 1);

// Percolation-probability proxy at a single radius threshold.
SurvivalCell estimate_theta(const SpaceTimeBox& box, const IntensityEnvironment& env,
                            Point origin, double radius, uint64_t trials, uint64_t seed,
                            bool directed = false, int workers = 1);

struct DecayEstimate {
    std::vector<SurvivalCell> cells;
    LineFit fit;          // log frequency against threshold
    double rate = 0.0;    // -slope
    double rate_stderr = 0.0;
};

struct DecayGrids {
    std::vector<double> size;          // thresholds for P(|C| >= v)
    std::vector<double> radius;        // thresholds for P(rad >= R)
    std::vector<double> space_extent;  // graph-distance tail
    std::vector<double> time_extent;   // time-offset tail
};

struct DecayRates {
    std::optional<DecayEstimate> size;
    std::optional<DecayEstimate> radius;
    std::optional<DecayEstimate> space_extent;
    std::optional<DecayEstimate> time_extent;
};

// Exponential tail-rate fits for the origin cluster statistics. Grids left
// empty are skipped; a grid whose cells are all empty raises
// InsufficientData, as does a fit with fewer than three occupied cells.
DecayRates estimate_decay_rates(const SpaceTimeBox& box, const IntensityEnvironment& env,
                                Point origin, const DecayGrids& grids, uint64_t trials,
                                uint64_t seed, bool directed = false, int workers = 1);

// Space-time distance max{graph distance, [log(1 + |s-t|)]^q}.
double spacetime_distance(const Graph& graph, Point a, Point b, double q_exponent);

struct TwoPointCell {
    Point a, b;
    double distance = 0.0;  // d_q
    uint64_t trials = 0;
    uint64_t connected = 0;
    double frequency = 0.0;
    double stderr_freq = 0.0;
};

// Empirical two-point connectivity for a list of point pairs, reported with
// the d_q distance of each pair; rows come back sorted by that distance.
std::vector<TwoPointCell> two_point_function(const SpaceTimeBox& box,
                                             const IntensityEnvironment& env,
                                             std::span<const std::pair<Point, Point>> pairs,
                                             double q_exponent, uint64_t trials, uint64_t seed,
                                             int workers = 1);

}  // namespace stperc
