#include "stperc/configuration.hpp"

#include <algorithm>
#include <string>

#include "stperc/errors.hpp"

namespace stperc {

namespace {

bool contains_time(const std::vector<double>& sorted, double t) {
    return std::binary_search(sorted.begin(), sorted.end(), t);
}

// True if some bridge time hits a cut time on either endpoint line exactly.
bool edge_collides(const Configuration& c, const Graph& g, uint64_t key,
                   const std::vector<double>& times) {
    const uint64_t edge = c.directed ? key / 2 : key;
    const auto [x, y] = g.edge_endpoints(edge);
    for (double t : times)
        if (contains_time(c.cuts[x], t) || contains_time(c.cuts[y], t)) return true;
    return false;
}

}  // namespace

uint64_t Configuration::total_cuts() const {
    uint64_t n = 0;
    for (const auto& line : cuts) n += line.size();
    return n;
}

uint64_t Configuration::total_bridges() const {
    uint64_t n = 0;
    for (const auto& [key, times] : bridges) n += times.size();
    return n;
}

Configuration sample_configuration(const SpaceTimeBox& box, const IntensityEnvironment& env,
                                   uint64_t seed, uint64_t replica, bool directed) {
    const Graph& g = box.graph();
    const double T = box.time_length();

    Configuration c;
    c.vertex_count = g.vertex_count();
    c.directed = directed;
    c.cuts.resize(g.vertex_count());
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        RngStream s(seed, StreamPurpose::Cuts, v, replica);
        c.cuts[v] = sample_poisson_times(env.cut_rate(v), T, s);
    }

    const uint64_t m = g.edge_count();
    for (uint64_t e = 0; e < m; ++e) {
        const double rate = env.bridge_rate(e);
        if (rate == 0.0) continue;
        const uint64_t orientations = directed ? 2 : 1;
        for (uint64_t d = 0; d < orientations; ++d) {
            const uint64_t key = directed ? 2 * e + d : e;
            RngStream s(seed, StreamPurpose::Bridges, key, replica);
            std::vector<double> times = sample_poisson_times(rate, T, s);
            // Exact bridge/cut collisions have probability zero; redraw the
            // edge if floating point produces one anyway.
            int attempts = 0;
            while (edge_collides(c, g, key, times)) {
                if (++attempts > 100)
                    throw CorruptState("sample_configuration: persistent time collision");
                times = sample_poisson_times(rate, T, s);
            }
            if (!times.empty()) c.bridges.emplace(key, std::move(times));
        }
    }
    return c;
}

std::vector<Configuration> sample_thinned_family(const SpaceTimeBox& box,
                                                 const IntensityEnvironment& env,
                                                 std::span<const double> bridge_factors,
                                                 uint64_t seed, uint64_t replica) {
    for (double f : bridge_factors)
        if (!(f >= 0.0) || !(f <= 1.0))
            throw InvalidParameter("sample_thinned_family: factors must lie in [0,1]");

    Configuration envelope = sample_configuration(box, env, seed, replica, false);

    std::vector<Configuration> family(bridge_factors.size());
    for (auto& c : family) {
        c.vertex_count = envelope.vertex_count;
        c.directed = false;
        c.cuts = envelope.cuts;
    }
    for (const auto& [key, times] : envelope.bridges) {
        RngStream marks(seed, StreamPurpose::Marks, key, replica);
        for (double t : times) {
            const double u = marks.next_unit();
            for (size_t i = 0; i < family.size(); ++i)
                if (u < bridge_factors[i]) family[i].bridges[key].push_back(t);
        }
    }
    return family;
}

std::pair<Configuration, SpaceTimeBox> rescale_time(const Configuration& config,
                                                    const SpaceTimeBox& box, double factor) {
    if (!(factor > 0.0)) throw InvalidParameter("rescale_time: factor must be positive");
    Configuration out = config;
    for (auto& line : out.cuts)
        for (double& t : line) t *= factor;
    for (auto& [key, times] : out.bridges)
        for (double& t : times) t *= factor;

    SpaceTimeBox scaled_box =
        box.boundary() == Boundary::PeriodicOn
            ? SpaceTimeBox(box.graph(), box.time_length() * factor, box.periodic_vertices())
            : SpaceTimeBox(box.graph(), box.time_length() * factor, box.boundary());
    validate_configuration(out, scaled_box);
    return {std::move(out), std::move(scaled_box)};
}

void validate_configuration(const Configuration& config, const SpaceTimeBox& box) {
    const Graph& g = box.graph();
    const double T = box.time_length();
    if (config.vertex_count != g.vertex_count())
        throw CorruptState("configuration: vertex count does not match box");
    if (config.cuts.size() != g.vertex_count())
        throw CorruptState("configuration: cut table size mismatch");
    for (uint32_t v = 0; v < config.cuts.size(); ++v) {
        double prev = 0.0;
        for (double t : config.cuts[v]) {
            if (!(t > prev) || !(t < T))
                throw CorruptState("configuration: cut times must be strictly increasing in (0,T)");
            prev = t;
        }
    }
    const uint64_t key_limit = config.directed ? 2 * g.edge_count() : g.edge_count();
    for (const auto& [key, times] : config.bridges) {
        if (key >= key_limit) throw CorruptState("configuration: bridge key out of range");
        if (times.empty()) throw CorruptState("configuration: empty bridge list");
        double prev = 0.0;
        const uint64_t edge = config.directed ? key / 2 : key;
        const auto [x, y] = g.edge_endpoints(edge);
        for (double t : times) {
            if (!(t > prev) || !(t < T))
                throw CorruptState(
                    "configuration: bridge times must be strictly increasing in (0,T)");
            prev = t;
            if (contains_time(config.cuts[x], t) || contains_time(config.cuts[y], t))
                throw CorruptState("configuration: bridge time collides with a cut at vertex " +
                                   std::to_string(contains_time(config.cuts[x], t) ? x : y));
        }
    }
}

}  // namespace stperc
