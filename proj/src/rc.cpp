#include "stperc/rc.hpp"

#include <algorithm>
#include <cmath>

#include "stperc/errors.hpp"

namespace stperc {

void validate_rc_params(const RcParams& params) {
    if (!(params.lambda >= 0.0)) throw InvalidParameter("rc params: lambda must be >= 0");
    if (!(params.delta > 0.0)) throw InvalidParameter("rc params: delta must be > 0");
    if (params.q < 1) throw InvalidParameter("rc params: q must be >= 1");
    if (params.sweeps == 0) throw InvalidParameter("rc params: sweeps must be positive");
}

RcState rc_initial_state(const SpaceTimeBox& box, const RcParams& params, uint64_t seed,
                         uint64_t replica) {
    validate_rc_params(params);
    RcState state;
    state.box = box;
    state.params = params;
    state.config = sample_configuration(
        box, IntensityEnvironment::uniform(params.lambda, params.delta), seed, replica, false);
    state.stream = RngStream(seed, StreamPurpose::Chain, 0, replica);
    const ClusterLabeling labeling = build_clusters(state.config, box);
    state.spins = color_clusters(labeling, params.q, state.stream);
    return state;
}

namespace {

// The input spins must be constant on the clusters of the input configuration
// and may only change value at cut times.
void check_consistency(const RcState& state, const ClusterLabeling& labeling) {
    const SpinField& spins = state.spins;
    const SegmentSet& segs = labeling.segments;
    if (spins.lines.size() != state.config.cuts.size())
        throw CorruptState("sw_sweep: spin field does not match configuration");
    for (uint32_t v = 0; v < spins.lines.size(); ++v) {
        for (const SpinPiece& p : spins.lines[v]) {
            if (p.spin >= state.params.q)
                throw CorruptState("sw_sweep: spin value outside {0..q-1}");
            if (p.start == 0.0 || p.full_circle) continue;
            if (!std::binary_search(state.config.cuts[v].begin(), state.config.cuts[v].end(),
                                    p.start))
                throw CorruptState("sw_sweep: spin piece boundary is not a cut time");
        }
    }
    std::vector<uint32_t> cluster_spin(labeling.cluster_count, UINT32_MAX);
    for (uint32_t i = 0; i < segs.size(); ++i) {
        const Segment& seg = segs[i];
        const uint32_t s = spins.spin_at(seg.vertex, seg.start);
        uint32_t& slot = cluster_spin[labeling.label[i]];
        if (slot == UINT32_MAX)
            slot = s;
        else if (slot != s)
            throw CorruptState("sw_sweep: spins are not constant on a cluster");
    }
}

std::vector<double> jump_times(const SpinField& spins, uint32_t vertex) {
    std::vector<std::pair<double, uint32_t>> boundaries;
    const auto& pieces = spins.lines[vertex];
    for (const SpinPiece& p : pieces) boundaries.emplace_back(p.start, p.spin);
    std::sort(boundaries.begin(), boundaries.end());
    std::vector<double> jumps;
    for (size_t i = 0; i < boundaries.size(); ++i) {
        const double t = boundaries[i].first;
        if (t == 0.0) continue;  // line start or wrap point, not a cut position
        const uint32_t before = spins.spin_at(vertex, std::nextafter(t, -1.0));
        if (before != boundaries[i].second) jumps.push_back(t);
    }
    return jumps;
}

}  // namespace

void sw_sweep(RcState& state) {
    validate_rc_params(state.params);
    const Graph& g = state.box.graph();
    const double T = state.box.time_length();
    const double lambda = state.params.lambda;
    const double delta = state.params.delta;
    const uint32_t q = state.params.q;

    {
        const ClusterLabeling current = build_clusters(state.config, state.box);
        check_consistency(state, current);
    }

    // (a) cuts: forced at spin jumps, plus fresh Poisson(delta) everywhere.
    Configuration next;
    next.vertex_count = g.vertex_count();
    next.directed = false;
    next.cuts.resize(g.vertex_count());
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        std::vector<double> cuts = sample_poisson_times(delta, T, state.stream);
        if (q > 1) {
            std::vector<double> forced = jump_times(state.spins, v);
            cuts.insert(cuts.end(), forced.begin(), forced.end());
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        }
        next.cuts[v] = std::move(cuts);
    }

    // (a) bridges: Poisson(lambda) per edge, kept on the agreement set of the
    // current spins. Exact collisions with the new cuts redraw the edge, the
    // same policy as fresh sampling.
    const uint64_t m = g.edge_count();
    for (uint64_t e = 0; e < m && lambda > 0.0; ++e) {
        const auto [x, y] = g.edge_endpoints(e);
        std::vector<double> times = sample_poisson_times(lambda, T, state.stream);
        int attempts = 0;
        auto collides = [&](const std::vector<double>& ts) {
            for (double t : ts)
                if (std::binary_search(next.cuts[x].begin(), next.cuts[x].end(), t) ||
                    std::binary_search(next.cuts[y].begin(), next.cuts[y].end(), t))
                    return true;
            return false;
        };
        while (collides(times)) {
            if (++attempts > 100) throw CorruptState("sw_sweep: persistent time collision");
            times = sample_poisson_times(lambda, T, state.stream);
        }
        std::vector<double> kept;
        for (double t : times)
            if (q == 1 || state.spins.spin_at(x, t) == state.spins.spin_at(y, t))
                kept.push_back(t);
        if (!kept.empty()) next.bridges.emplace(e, std::move(kept));
    }

    // (b) rebuild and recolor.
    state.config = std::move(next);
    const ClusterLabeling labeling = build_clusters(state.config, state.box);
    state.spins = color_clusters(labeling, q, state.stream);
    ++state.sweep_index;
}

void rc_advance(RcState& state, uint64_t sweeps,
                const std::function<void(const RcState&)>& observer) {
    for (uint64_t i = 0; i < sweeps; ++i) {
        sw_sweep(state);
        if (observer) observer(state);
    }
}

RcState sample_rc(const SpaceTimeBox& box, const RcParams& params, uint64_t seed,
                  uint64_t replica) {
    RcState state = rc_initial_state(box, params, seed, replica);
    rc_advance(state, params.burnin + params.sweeps);
    return state;
}

}  // namespace stperc
