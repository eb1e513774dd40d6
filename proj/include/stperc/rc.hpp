#pragma once

#include <cstdint>
#include <functional>

#include "stperc/clusters.hpp"
#include "stperc/configuration.hpp"
#include "stperc/rng.hpp"
#include "stperc/spacetime.hpp"
#include "stperc/spins.hpp"

namespace stperc {

// Parameters of the cluster-weighted (q^k) measure and of its sampler. The
// sampler needs integer q; real q >= 1 appears only in closed-form work.
struct RcParams {
    double lambda = 1.0;
    double delta = 1.0;
    uint32_t q = 1;
    uint64_t sweeps = 10000;
    uint64_t burnin = 1000;
};

void validate_rc_params(const RcParams& params);

// Coupled (configuration, spin field) state of one chain. The stream is the
// only randomness source once the chain is running, so (key, counter) plus
// the state give bit-exact resumption.
struct RcState {
    SpaceTimeBox box;
    RcParams params;
    Configuration config;
    SpinField spins;
    uint64_t sweep_index = 0;
    RngStream stream;
};

// Fresh percolation sample colored uniformly: the chain's starting point.
RcState rc_initial_state(const SpaceTimeBox& box, const RcParams& params, uint64_t seed,
                         uint64_t replica = 0);

// One full alternation: cuts are resampled as spin jumps plus fresh
// Poisson(delta) everywhere, bridges as Poisson(lambda) kept only where the
// current spins agree across the edge; clusters are rebuilt and recolored
// uniformly. With q = 1 this reduces to unconditioned resampling. Draw order
// is fixed: cut processes by vertex, then bridge processes by edge id, then
// cluster colors by label.
void sw_sweep(RcState& state);

// Runs sweeps, invoking the observer (if any) after each one.
void rc_advance(RcState& state, uint64_t sweeps,
                const std::function<void(const RcState&)>& observer = nullptr);

// Chain state after burn-in plus sweeps.
RcState sample_rc(const SpaceTimeBox& box, const RcParams& params, uint64_t seed,
                  uint64_t replica = 0);

}  // namespace stperc
