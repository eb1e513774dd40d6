#include "stperc/environment.hpp"

#include <cmath>
#include <string>

#include "stperc/errors.hpp"

namespace stperc {

RateLaw RateLaw::point_mass(double value) {
    if (!(value >= 0.0)) throw InvalidParameter("rate law: point mass must be non-negative");
    RateLaw law;
    law.kind = Kind::PointMass;
    law.value = value;
    return law;
}

RateLaw RateLaw::log_normal(double mu, double sigma) {
    if (!(sigma >= 0.0)) throw InvalidParameter("rate law: sigma must be non-negative");
    RateLaw law;
    law.kind = Kind::LogNormal;
    law.mu = mu;
    law.sigma = sigma;
    return law;
}

RateLaw RateLaw::two_point(double lo, double hi, double p_hi) {
    if (!(lo >= 0.0) || !(hi >= lo)) throw InvalidParameter("rate law: need 0 <= lo <= hi");
    if (!(p_hi >= 0.0) || !(p_hi <= 1.0)) throw InvalidParameter("rate law: p_hi outside [0,1]");
    RateLaw law;
    law.kind = Kind::TwoPoint;
    law.lo = lo;
    law.hi = hi;
    law.p_hi = p_hi;
    return law;
}

double RateLaw::sample(RngStream& stream) const {
    switch (kind) {
        case Kind::PointMass:
            return value;
        case Kind::LogNormal:
            return std::exp(mu + sigma * stream.next_gaussian());
        case Kind::TwoPoint:
            return stream.next_unit() < p_hi ? hi : lo;
    }
    throw InvalidParameter("rate law: unknown kind");
}

IntensityEnvironment IntensityEnvironment::uniform(double bridge_rate, double cut_rate) {
    if (!(bridge_rate >= 0.0) || !(cut_rate >= 0.0))
        throw InvalidParameter("environment: rates must be non-negative");
    IntensityEnvironment env;
    env.uniform_ = true;
    env.bridge_uniform_ = bridge_rate;
    env.cut_uniform_ = cut_rate;
    return env;
}

IntensityEnvironment IntensityEnvironment::quenched(std::vector<double> bridge_rates,
                                                    std::vector<double> cut_rates) {
    for (double r : bridge_rates)
        if (!(r >= 0.0)) throw InvalidParameter("environment: rates must be non-negative");
    for (double r : cut_rates)
        if (!(r >= 0.0)) throw InvalidParameter("environment: rates must be non-negative");
    IntensityEnvironment env;
    env.uniform_ = false;
    env.bridge_rates_ = std::move(bridge_rates);
    env.cut_rates_ = std::move(cut_rates);
    return env;
}

double IntensityEnvironment::cut_rate(uint32_t vertex) const {
    if (uniform_) return cut_uniform_;
    if (vertex >= cut_rates_.size())
        throw InvalidParameter("environment: vertex out of range");
    return cut_rates_[vertex];
}

double IntensityEnvironment::bridge_rate(uint64_t edge) const {
    if (uniform_) return bridge_uniform_;
    if (edge >= bridge_rates_.size())
        throw InvalidParameter("environment: edge out of range");
    return bridge_rates_[edge];
}

IntensityEnvironment IntensityEnvironment::scaled(double bridge_factor, double cut_factor) const {
    if (!(bridge_factor >= 0.0) || !(cut_factor >= 0.0))
        throw InvalidParameter("environment: scale factors must be non-negative");
    IntensityEnvironment env(*this);
    if (uniform_) {
        env.bridge_uniform_ *= bridge_factor;
        env.cut_uniform_ *= cut_factor;
    } else {
        for (double& r : env.bridge_rates_) r *= bridge_factor;
        for (double& r : env.cut_rates_) r *= cut_factor;
    }
    return env;
}

IntensityEnvironment sample_environment(const Graph& graph, const RateLaw& bridge_law,
                                        const RateLaw& cut_law, uint64_t seed,
                                        uint64_t replica) {
    if (bridge_law.deterministic() && cut_law.deterministic())
        return IntensityEnvironment::uniform(bridge_law.value, cut_law.value);
    if (graph.edge_count() > 10'000'000)
        throw CapacityError("environment: quenched rates on " +
                            std::to_string(graph.edge_count()) + " edges");
    std::vector<double> cuts(graph.vertex_count());
    for (uint32_t v = 0; v < graph.vertex_count(); ++v) {
        RngStream s(seed, StreamPurpose::Environment, v, replica);
        cuts[v] = cut_law.sample(s);
    }
    std::vector<double> bridges(graph.edge_count());
    constexpr uint64_t kEdgeEntityBase = uint64_t{1} << 40;
    for (uint64_t e = 0; e < bridges.size(); ++e) {
        RngStream s(seed, StreamPurpose::Environment, kEdgeEntityBase + e, replica);
        bridges[e] = bridge_law.sample(s);
    }
    return IntensityEnvironment::quenched(std::move(bridges), std::move(cuts));
}

}  // namespace stperc
