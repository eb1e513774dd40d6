#pragma once

#include <cstdint>
#include <vector>

#include "stperc/rng.hpp"

namespace stperc {

// Mean family size F of the branching approximation on the complete graph
// with unit cut rate: F = lambda * (2(1 - e^{-beta}) - beta e^{-beta}).
double mean_family_size(double beta, double lambda);

// Cluster-weighted mean family size F_q; F_1 coincides with F.
double weighted_mean_family_size(double beta, double lambda, double q);

// Predicted critical bridge intensity: the root in lambda of F_q = 1.
double critical_lambda(double beta, double q);

// Normalizer of the weighted cut-count law on an isolated circle of length
// beta: Z = (q-1) e^{-beta} + e^{beta(q-1)}.
double cut_count_normalizer(double beta, double q);

// P(D = k) = (e^{-beta} / Z) q^{max(k,1)} beta^k / k!.
double cut_count_pmf(uint64_t k, double beta, double q);

// Mean of the cut-free interval around a reference point on a weighted line;
// equals q F_q(beta, lambda, q) / lambda for every lambda.
double mean_weighted_interval(double beta, double q);

uint64_t sample_cut_count(double beta, double q, RngStream& stream);

// Draws the interval: D cuts placed uniformly on the circle, returning the
// length of the arc containing a fixed reference point (beta when D <= 1).
double sample_weighted_interval(double beta, double q, RngStream& stream);

// Offspring intensity per unit interval length: Full uses lambda (the
// complete-graph model), PerColor uses lambda / q (the product bounding
// model).
enum class OffspringRate { Full, PerColor };

double offspring_rate_value(double lambda, double q, OffspringRate rate);

// Minimal nonnegative solution of pi = 1 - E exp(-r |I| pi), solved by damped
// fixed-point iteration on a quadrature of the interval law. Returns 0 when
// r E|I| <= 1.
double survival_probability(double beta, double lambda, double q, OffspringRate rate);

struct BranchingEstimate {
    double probability = 0.0;
    double stderr_value = 0.0;
    uint64_t trees = 0;
};

// Direct tree simulation of the same branching process. A population of 64
// alive individuals is scored as survival; with the parameter ranges used
// here the error of that rule is far below the binomial noise.
BranchingEstimate simulate_branching_survival(double beta, double lambda, double q,
                                              OffspringRate rate, uint64_t trees, uint64_t seed,
                                              uint64_t replica = 0, int workers = 1);

struct MeanFieldSample {
    uint32_t n = 0;
    double beta = 0.0;
    double largest_measure = 0.0;  // M, in [0, n beta]
    double fraction = 0.0;         // M / n, in [0, beta]
};

// Cluster model on the complete graph times a circle of length beta with unit
// cut rate and per-edge bridge rate lambda / n. q = 1 samples directly
// (sweeps and burnin are ignored); q >= 2 runs the cluster-weighted chain.
MeanFieldSample simulate_complete_graph(uint32_t n, double beta, double lambda, uint32_t q,
                                        uint64_t sweeps, uint64_t burnin, uint64_t seed,
                                        uint64_t replica = 0);

// Coupled q = 1 samples at several bridge intensities: bridges are thinned
// from a common envelope process, so the largest-cluster measure is
// nondecreasing along the (sorted ascending) lambda list sample by sample.
std::vector<MeanFieldSample> simulate_complete_graph_coupled(uint32_t n, double beta,
                                                             const std::vector<double>& lambdas,
                                                             uint64_t seed,
                                                             uint64_t replica = 0);

// Bounding model with independent weighted cut lines (real q >= 1) and
// independent Poisson bridges at per-edge rate (lambda / q) / n.
MeanFieldSample sample_product_rc_model(uint32_t n, double beta, double lambda, double q,
                                        uint64_t seed, uint64_t replica = 0);

}  // namespace stperc
