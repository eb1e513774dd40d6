#include "stperc/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "stperc/errors.hpp"
#include "stperc/util.hpp"

namespace stperc {

namespace {

// Largest radius any cluster containing the origin can attain in the box.
double radius_bound(const SpaceTimeBox& box, Point origin) {
    const auto dist = box.graph().bfs_distances(origin.vertex);
    double max_d = 0.0;
    for (uint32_t d : dist) max_d = std::max(max_d, static_cast<double>(d));
    const double max_t = std::max(origin.time, box.time_length() - origin.time);
    return max_d + max_t;
}

void fill_frequencies(std::vector<SurvivalCell>& cells) {
    for (SurvivalCell& c : cells) {
        c.frequency = static_cast<double>(c.successes) / static_cast<double>(c.trials);
        c.stderr_freq = binomial_stderr(c.successes, c.trials);
    }
}

DecayEstimate tail_fit(const std::vector<double>& grid,
                       const std::vector<std::atomic<uint64_t>>& hits, size_t offset,
                       uint64_t trials) {
    DecayEstimate est;
    uint64_t nonzero = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        SurvivalCell c;
        c.threshold = grid[i];
        c.trials = trials;
        c.successes = hits[offset + i].load();
        if (c.successes > 0) ++nonzero;
        est.cells.push_back(c);
    }
    if (nonzero == 0) throw InsufficientData("estimate_decay_rates: all cells empty");
    fill_frequencies(est.cells);
    std::vector<double> xs, ys;
    for (const SurvivalCell& c : est.cells) {
        if (c.successes == 0) continue;
        xs.push_back(c.threshold);
        ys.push_back(std::log(c.frequency));
    }
    if (xs.size() < 3)
        throw InsufficientData("estimate_decay_rates: need three occupied cells for a fit");
    est.fit = fit_line(xs, ys);
    est.rate = -est.fit.slope;
    est.rate_stderr = est.fit.slope_stderr;
    return est;
}

}  // namespace

TrialStats origin_cluster_stats(const SpaceTimeBox& box, const IntensityEnvironment& env,
                                Point origin, uint64_t seed, uint64_t replica, bool directed) {
    validate_point(box, origin);
    const Configuration config = sample_configuration(box, env, seed, replica, directed);
    TrialStats s;
    if (directed) {
        const DirectedReach reach = directed_reach(config, box, origin);
        s.measure = reach.total_measure;
        s.radius = reach.radius;
        s.space_extent = reach.space_extent;
        s.time_extent = reach.time_extent;
    } else {
        const ClusterLabeling labeling = build_clusters(config, box);
        const ClusterInfo info = cluster_at(labeling, box, origin);
        s.measure = info.measure;
        s.radius = info.radius;
        s.space_extent = info.space_extent;
        s.time_extent = info.time_extent;
    }
    return s;
}

std::vector<SurvivalCell> radius_survival_curve(const SpaceTimeBox& box,
                                                const IntensityEnvironment& env, Point origin,
                                                std::span<const double> radii, uint64_t trials,
                                                uint64_t seed, bool directed, int workers) {
    validate_point(box, origin);
    if (radii.empty()) throw InvalidParameter("radius_survival_curve: empty threshold list");
    if (trials == 0) throw InvalidParameter("radius_survival_curve: trials must be positive");
    const double bound = radius_bound(box, origin);
    for (double r : radii) {
        if (!(r >= 0.0)) throw InvalidParameter("radius_survival_curve: negative threshold");
        if (r > bound)
            throw InvalidParameter("radius_survival_curve: threshold " + format_double(r) +
                                   " exceeds the box bound " + format_double(bound));
    }

    std::vector<std::atomic<uint64_t>> hits(radii.size());
    parallel_for(trials, workers, [&](uint64_t i) {
        const TrialStats s = origin_cluster_stats(box, env, origin, seed, i, directed);
        for (size_t k = 0; k < radii.size(); ++k)
            if (s.radius >= radii[k]) hits[k].fetch_add(1, std::memory_order_relaxed);
    });

    std::vector<SurvivalCell> cells(radii.size());
    for (size_t k = 0; k < radii.size(); ++k) {
        cells[k].threshold = radii[k];
        cells[k].trials = trials;
        cells[k].successes = hits[k].load();
    }
    fill_frequencies(cells);
    return cells;
}

SurvivalCell estimate_theta(const SpaceTimeBox& box, const IntensityEnvironment& env,
                            Point origin, double radius, uint64_t trials, uint64_t seed,
                            bool directed, int workers) {
    const double r[] = {radius};
    return radius_survival_curve(box, env, origin, r, trials, seed, directed, workers)[0];
}

DecayRates estimate_decay_rates(const SpaceTimeBox& box, const IntensityEnvironment& env,
                                Point origin, const DecayGrids& grids, uint64_t trials,
                                uint64_t seed, bool directed, int workers) {
    validate_point(box, origin);
    if (trials == 0) throw InvalidParameter("estimate_decay_rates: trials must be positive");
    const size_t total =
        grids.size.size() + grids.radius.size() + grids.space_extent.size() +
        grids.time_extent.size();
    if (total == 0) throw InvalidParameter("estimate_decay_rates: all grids are empty");

    const size_t off_size = 0;
    const size_t off_radius = off_size + grids.size.size();
    const size_t off_space = off_radius + grids.radius.size();
    const size_t off_time = off_space + grids.space_extent.size();

    std::vector<std::atomic<uint64_t>> hits(total);
    parallel_for(trials, workers, [&](uint64_t i) {
        const TrialStats s = origin_cluster_stats(box, env, origin, seed, i, directed);
        for (size_t k = 0; k < grids.size.size(); ++k)
            if (s.measure >= grids.size[k]) hits[off_size + k].fetch_add(1);
        for (size_t k = 0; k < grids.radius.size(); ++k)
            if (s.radius >= grids.radius[k]) hits[off_radius + k].fetch_add(1);
        for (size_t k = 0; k < grids.space_extent.size(); ++k)
            if (s.space_extent >= grids.space_extent[k]) hits[off_space + k].fetch_add(1);
        for (size_t k = 0; k < grids.time_extent.size(); ++k)
            if (s.time_extent >= grids.time_extent[k]) hits[off_time + k].fetch_add(1);
    });

    DecayRates out;
    if (!grids.size.empty()) out.size = tail_fit(grids.size, hits, off_size, trials);
    if (!grids.radius.empty()) out.radius = tail_fit(grids.radius, hits, off_radius, trials);
    if (!grids.space_extent.empty())
        out.space_extent = tail_fit(grids.space_extent, hits, off_space, trials);
    if (!grids.time_extent.empty())
        out.time_extent = tail_fit(grids.time_extent, hits, off_time, trials);
    return out;
}

double spacetime_distance(const Graph& graph, Point a, Point b, double q_exponent) {
    if (!(q_exponent > 0.0)) throw InvalidParameter("spacetime_distance: q must be positive");
    if (a.vertex >= graph.vertex_count() || b.vertex >= graph.vertex_count())
        throw InvalidParameter("spacetime_distance: vertex out of range");
    const double d = static_cast<double>(graph.bfs_distances(a.vertex)[b.vertex]);
    const double t = std::pow(std::log1p(std::fabs(a.time - b.time)), q_exponent);
    return std::max(d, t);
}

std::vector<TwoPointCell> two_point_function(const SpaceTimeBox& box,
                                             const IntensityEnvironment& env,
                                             std::span<const std::pair<Point, Point>> pairs,
                                             double q_exponent, uint64_t trials, uint64_t seed,
                                             int workers) {
    if (pairs.empty()) throw InvalidParameter("two_point_function: empty pair list");
    if (trials == 0) throw InvalidParameter("two_point_function: trials must be positive");
    std::vector<TwoPointCell> cells(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k) {
        validate_point(box, pairs[k].first);
        validate_point(box, pairs[k].second);
        cells[k].a = pairs[k].first;
        cells[k].b = pairs[k].second;
        cells[k].distance = spacetime_distance(box.graph(), pairs[k].first, pairs[k].second,
                                               q_exponent);
        cells[k].trials = trials;
    }

    std::vector<std::atomic<uint64_t>> hits(pairs.size());
    parallel_for(trials, workers, [&](uint64_t i) {
        const Configuration config = sample_configuration(box, env, seed, i, false);
        const ClusterLabeling labeling = build_clusters(config, box);
        for (size_t k = 0; k < pairs.size(); ++k) {
            const Point& a = pairs[k].first;
            const Point& b = pairs[k].second;
            const uint32_t la = labeling.label_at(a.vertex, canonical_time(box, a.vertex, a.time));
            const uint32_t lb = labeling.label_at(b.vertex, canonical_time(box, b.vertex, b.time));
            if (la == lb) hits[k].fetch_add(1, std::memory_order_relaxed);
        }
    });

    for (size_t k = 0; k < cells.size(); ++k) {
        cells[k].connected = hits[k].load();
        cells[k].frequency =
            static_cast<double>(cells[k].connected) / static_cast<double>(trials);
        cells[k].stderr_freq = binomial_stderr(cells[k].connected, cells[k].trials);
    }
    std::sort(cells.begin(), cells.end(),
              [](const TwoPointCell& a, const TwoPointCell& b) { return a.distance < b.distance; });
    return cells;
}

}  // namespace stperc
