#pragma once

#include <cstdint>
#include <vector>

#include "stperc/graph.hpp"
#include "stperc/rng.hpp"

namespace stperc {

// Law of a single random intensity. Supported families: point mass,
// log-normal exp(N(mu, sigma^2)), and a two-point law taking hi with
// probability p_hi and lo otherwise.
struct RateLaw {
    enum class Kind { PointMass, LogNormal, TwoPoint };

    Kind kind = Kind::PointMass;
    double value = 0.0;              // point mass
    double mu = 0.0, sigma = 0.0;    // log-normal parameters
    double lo = 0.0, hi = 0.0, p_hi = 0.0;  // two-point parameters

    static RateLaw point_mass(double value);
    static RateLaw log_normal(double mu, double sigma);
    static RateLaw two_point(double lo, double hi, double p_hi);

    bool deterministic() const { return kind == Kind::PointMass; }
    double sample(RngStream& stream) const;
};

// Per-line cut intensities and per-edge bridge intensities over a graph.
// Uniform environments store two scalars and work for arbitrarily large
// graphs; quenched (per-entity) environments store explicit tables.
class IntensityEnvironment {
  public:
    IntensityEnvironment() = default;

    static IntensityEnvironment uniform(double bridge_rate, double cut_rate);
    static IntensityEnvironment quenched(std::vector<double> bridge_rates,
                                         std::vector<double> cut_rates);

    bool uniform_rates() const { return uniform_; }
    double cut_rate(uint32_t vertex) const;
    double bridge_rate(uint64_t edge) const;

    // New environment with all bridge (resp. cut) rates multiplied.
    IntensityEnvironment scaled(double bridge_factor, double cut_factor) const;

  private:
    bool uniform_ = true;
    double bridge_uniform_ = 0.0;
    double cut_uniform_ = 0.0;
    std::vector<double> bridge_rates_;
    std::vector<double> cut_rates_;
};

// Draws one intensity per vertex and per edge from the given laws, keyed so
// the same (seed, replica) always yields the same environment.
IntensityEnvironment sample_environment(const Graph& graph, const RateLaw& bridge_law,
                                        const RateLaw& cut_law, uint64_t seed,
                                        uint64_t replica = 0);

}  // namespace stperc
