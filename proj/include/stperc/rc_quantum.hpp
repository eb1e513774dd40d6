#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stperc/graph.hpp"
#include "stperc/stats.hpp"

namespace stperc {

// Monte Carlo budget for density-element estimation. Errors are batch-means
// standard errors over non-overlapping batches of recorded sweeps.
struct McParams {
    uint64_t sweeps = 10000;
    uint64_t burnin = 1000;
    uint32_t batches = 32;
    uint64_t seed = 0;
    uint64_t replica = 0;
};

void validate_mc_params(const McParams& mc);

struct MatrixEstimate {
    Eigen::MatrixXd values;
    Eigen::MatrixXd errors;
    uint64_t sweeps = 0;
};

// Estimates every element of the thermal density operator of the transverse
// field Ising model on `graph` at inverse temperature beta, using one q = 2
// cluster chain on the box graph x [0, beta] with free ends. The element at
// (row eta, column eta') is the ratio
//     P(end spins: bottom = eta, top = eta') / P(bottom = top),
// so all elements share a denominator estimated from the same chain.
MatrixEstimate rc_density_matrix(const Graph& graph, double lambda, double delta, double beta,
                                 const McParams& mc);

RatioEstimate rc_density_element(const Graph& graph, double lambda, double delta, double beta,
                                 uint64_t eta, uint64_t eta_prime, const McParams& mc);

// Reduced-to-W analogue: lines outside `keep` are periodic (their end spins
// are identified by the geometry), lines in `keep` stay free, and the basis
// index runs over the kept vertices in sorted order. keep = all vertices
// coincides with rc_density_matrix.
MatrixEstimate rc_reduced_density_matrix(const Graph& graph, double lambda, double delta,
                                         double beta, const std::vector<uint32_t>& keep,
                                         const McParams& mc);

RatioEstimate rc_reduced_element(const Graph& graph, double lambda, double delta, double beta,
                                 const std::vector<uint32_t>& keep, uint64_t eta,
                                 uint64_t eta_prime, const McParams& mc);

// Chain segment [-m, m+L] with the block W = [0, L] kept: vertices are the
// path graph on 2m + L + 1 sites and W sits at graph indices m .. m+L.
Graph chain_segment_graph(uint32_t L, uint32_t m);
std::vector<uint32_t> chain_segment_block(uint32_t L, uint32_t m);

// Spectral norm of rho_m^L - rho_n^L where rho_m^L is the ground-state
// density on [-m, m+L] reduced to [0, L]. Exact mode: both reductions by
// eigendecomposition end to end.
double norm_difference_exact(uint32_t L, uint32_t m, uint32_t n, double lambda, double delta);

// Monte Carlo mode: both reduced matrices estimated at finite beta by
// rc_reduced_density_matrix on independent chains; the error is a
// leave-one-batch-out jackknife over paired batches.
RatioEstimate norm_difference_mc(uint32_t L, uint32_t m, uint32_t n, double lambda,
                                 double delta, double beta, const McParams& mc);

}  // namespace stperc
