#include "stperc/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

#include "stperc/clusters.hpp"
#include "stperc/configuration.hpp"
#include "stperc/directed.hpp"
#include "stperc/environment.hpp"
#include "stperc/errors.hpp"
#include "stperc/estimators.hpp"
#include "stperc/graph.hpp"
#include "stperc/meanfield.hpp"
#include "stperc/quantum.hpp"
#include "stperc/rc.hpp"
#include "stperc/rc_quantum.hpp"
#include "stperc/rng.hpp"
#include "stperc/spacetime.hpp"
#include "stperc/stats.hpp"
#include "stperc/util.hpp"

namespace stperc {

namespace {

using nlohmann::json;

std::string strf(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return std::string(buf);
}

// Decorrelates the sub-experiments of different criteria run under one
// user-level seed.
uint64_t derived_seed(uint64_t seed, uint64_t tag) {
    return RngStream(seed, StreamPurpose::Generic, 0xACCE97, tag).next_u64();
}

double z_score(double estimate, double exact, double err) {
    if (err > 0.0) return (estimate - exact) / err;
    return estimate == exact ? 0.0 : std::numeric_limits<double>::infinity();
}

struct NamedGraph {
    std::string name;
    Graph graph;
};

std::vector<NamedGraph> graphs_up_to_three() {
    return {{"single", Graph::single_vertex()},
            {"edge", Graph::path(2)},
            {"path3", Graph::path(3)},
            {"triangle", Graph::cycle(3)}};
}

struct ModelPoint {
    double lambda, delta, beta;
};

std::vector<ModelPoint> model_points() {
    return {{1.0, 1.0, 1.0}, {2.0, 1.0, 0.5}, {0.5, 2.0, 2.0}};
}

std::string point_label(const ModelPoint& p) {
    return strf("(lambda=%g, delta=%g, beta=%g)", p.lambda, p.delta, p.beta);
}

// Shared element-comparison tail for criteria 1 and 2: all |z| <= 3 and at
// least 95% of elements with |z| <= 2.
struct ElementTally {
    uint64_t total = 0;
    uint64_t within_two = 0;
    uint64_t beyond_three = 0;
    double max_abs_z = 0.0;
    json records = json::array();

    void add(const std::string& object, double exact, double estimate, double err) {
        const double z = z_score(estimate, exact, err);
        ++total;
        if (std::fabs(z) <= 2.0) ++within_two;
        if (!(std::fabs(z) <= 3.0)) ++beyond_three;
        max_abs_z = std::max(max_abs_z, std::fabs(z));
        records.push_back({{"object", object},
                           {"exact", exact},
                           {"estimate", estimate},
                           {"stderr", err},
                           {"z", z}});
    }

    bool passed() const {
        return beyond_three == 0 && within_two >= static_cast<uint64_t>(
                                        std::ceil(0.95 * static_cast<double>(total)));
    }

    std::string summary() const {
        return strf("%llu elements, max |z| = %.2f, %.1f%% within 2",
                    static_cast<unsigned long long>(total), max_abs_z,
                    100.0 * static_cast<double>(within_two) / static_cast<double>(total));
    }
};

// ---------------------------------------------------------------- criterion 1

CriterionResult criterion_density_elements(ValidationLevel level, uint64_t seed, int workers) {
    CriterionResult out;
    out.index = 1;
    out.name = "thermal density elements vs exact diagonalization";

    McParams base;
    base.sweeps = level == ValidationLevel::Full ? 100000 : 30000;
    base.burnin = level == ValidationLevel::Full ? 1000 : 300;
    base.seed = derived_seed(seed, 1);
    base.batches = level == ValidationLevel::Full ? 256 : 64;

    struct Job {
        std::string label;
        Graph graph;
        ModelPoint point;
        Eigen::MatrixXd exact;
        MatrixEstimate estimate;
    };
    std::vector<Job> jobs;
    for (const NamedGraph& g : graphs_up_to_three())
        for (const ModelPoint& p : model_points()) {
            Job job;
            job.label = g.name + " " + point_label(p);
            job.graph = g.graph;
            job.point = p;
            job.exact =
                gibbs_density(ising_hamiltonian(g.graph, p.lambda, p.delta), p.beta).matrix();
            jobs.push_back(std::move(job));
        }

    parallel_for(jobs.size(), workers, [&](uint64_t i) {
        Job& job = jobs[i];
        McParams mc = base;
        mc.replica = i;
        job.estimate =
            rc_density_matrix(job.graph, job.point.lambda, job.point.delta, job.point.beta, mc);
    });

    ElementTally tally;
    for (const Job& job : jobs)
        for (Eigen::Index r = 0; r < job.exact.rows(); ++r)
            for (Eigen::Index c = 0; c < job.exact.cols(); ++c)
                tally.add(strf("%s rho[%ld,%ld]", job.label.c_str(), long(r), long(c)),
                          job.exact(r, c), job.estimate.values(r, c), job.estimate.errors(r, c));

    out.records = std::move(tally.records);
    out.passed = tally.passed();
    out.detail = tally.summary() +
                 strf(", %llu sweeps/chain", static_cast<unsigned long long>(base.sweeps));
    return out;
}

// ---------------------------------------------------------------- criterion 2

std::vector<std::vector<uint32_t>> strict_subsets(uint32_t n) {
    std::vector<std::vector<uint32_t>> out;
    for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<uint32_t> subset;
        for (uint32_t v = 0; v < n; ++v)
            if (mask & (1u << v)) subset.push_back(v);
        out.push_back(std::move(subset));
    }
    return out;
}

std::string subset_label(const std::vector<uint32_t>& w) {
    std::string s = "{";
    for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s + "}";
}

CriterionResult criterion_reduced_elements(ValidationLevel level, uint64_t seed, int workers) {
    CriterionResult out;
    out.index = 2;
    out.name = "reduced density elements vs exact partial trace";

    McParams base;
    base.sweeps = level == ValidationLevel::Full ? 100000 : 30000;
    base.burnin = level == ValidationLevel::Full ? 1000 : 300;
    base.seed = derived_seed(seed, 2);
    base.batches = level == ValidationLevel::Full ? 256 : 64;

    struct Job {
        std::string label;
        Graph graph;
        ModelPoint point;
        std::vector<uint32_t> keep;
        Eigen::MatrixXd exact;
        MatrixEstimate estimate;
    };
    std::vector<Job> jobs;
    const std::vector<NamedGraph> graphs = {{"edge", Graph::path(2)}, {"path3", Graph::path(3)}};
    for (const NamedGraph& g : graphs)
        for (const ModelPoint& p : model_points())
            for (const std::vector<uint32_t>& w : strict_subsets(g.graph.vertex_count())) {
                Job job;
                job.label = g.name + " W=" + subset_label(w) + " " + point_label(p);
                job.graph = g.graph;
                job.point = p;
                job.keep = w;
                const DensityOperator full =
                    gibbs_density(ising_hamiltonian(g.graph, p.lambda, p.delta), p.beta);
                job.exact = reduced_density(full, w).matrix();
                jobs.push_back(std::move(job));
            }

    parallel_for(jobs.size(), workers, [&](uint64_t i) {
        Job& job = jobs[i];
        McParams mc = base;
        mc.replica = i;
        job.estimate = rc_reduced_density_matrix(job.graph, job.point.lambda, job.point.delta,
                                                 job.point.beta, job.keep, mc);
    });

    ElementTally tally;
    for (const Job& job : jobs)
        for (Eigen::Index r = 0; r < job.exact.rows(); ++r)
            for (Eigen::Index c = 0; c < job.exact.cols(); ++c)
                tally.add(strf("%s rho[%ld,%ld]", job.label.c_str(), long(r), long(c)),
                          job.exact(r, c), job.estimate.values(r, c), job.estimate.errors(r, c));

    out.records = std::move(tally.records);
    out.passed = tally.passed();
    out.detail = tally.summary() +
                 strf(", %llu sweeps/chain", static_cast<unsigned long long>(base.sweeps));
    return out;
}

// ---------------------------------------------------------------- criterion 3

CriterionResult criterion_single_color_reduction(ValidationLevel level, uint64_t seed,
                                                 int /*workers*/) {
    CriterionResult out;
    out.index = 3;
    out.name = "single-color sweep reproduces the raw point process";

    const uint64_t sweeps = level == ValidationLevel::Full ? 10000 : 2000;
    const uint64_t sub_seed = derived_seed(seed, 3);
    const Graph graph = Graph::path(3);
    const double time_length = 1.5, lambda = 1.2, delta = 1.0;
    const SpaceTimeBox box(graph, time_length, Boundary::PeriodicAll);
    const uint32_t n = graph.vertex_count();
    const uint64_t edges = graph.edge_count();

    RcParams params;
    params.lambda = lambda;
    params.delta = delta;
    params.q = 1;
    params.sweeps = sweeps;
    params.burnin = 0;
    RcState state = rc_initial_state(box, params, sub_seed, 0);

    std::vector<double> cut_sums(n, 0.0), bridge_sums(edges, 0.0);
    std::vector<uint64_t> chain_hist;
    const auto record_count = [](std::vector<uint64_t>& hist, uint32_t k) {
        if (hist.size() <= k) hist.resize(k + 1, 0);
        ++hist[k];
    };
    for (uint64_t s = 0; s < sweeps; ++s) {
        sw_sweep(state);
        for (uint32_t v = 0; v < n; ++v) cut_sums[v] += double(state.config.cuts[v].size());
        for (uint64_t e = 0; e < edges; ++e) {
            const auto it = state.config.bridges.find(e);
            bridge_sums[e] += it == state.config.bridges.end() ? 0.0 : double(it->second.size());
        }
        record_count(chain_hist, build_clusters(state.config, box).cluster_count);
    }

    const IntensityEnvironment env = IntensityEnvironment::uniform(lambda, delta);
    std::vector<uint64_t> fresh_hist;
    for (uint64_t s = 0; s < sweeps; ++s) {
        const Configuration config = sample_configuration(box, env, sub_seed, 1 + s);
        record_count(fresh_hist, build_clusters(config, box).cluster_count);
    }
    const size_t bins = std::max(chain_hist.size(), fresh_hist.size());
    chain_hist.resize(bins, 0);
    fresh_hist.resize(bins, 0);

    bool counts_ok = true;
    double max_z = 0.0;
    out.records = json::array();
    const double nd = static_cast<double>(sweeps);
    for (uint32_t v = 0; v < n; ++v) {
        const double mean = cut_sums[v] / nd;
        const double z = (mean - delta * time_length) / std::sqrt(delta * time_length / nd);
        max_z = std::max(max_z, std::fabs(z));
        counts_ok = counts_ok && std::fabs(z) <= 3.0;
        out.records.push_back({{"object", strf("cuts line %u", v)},
                               {"exact", delta * time_length},
                               {"estimate", mean},
                               {"stderr", std::sqrt(delta * time_length / nd)},
                               {"z", z}});
    }
    for (uint64_t e = 0; e < edges; ++e) {
        const double mean = bridge_sums[e] / nd;
        const double z = (mean - lambda * time_length) / std::sqrt(lambda * time_length / nd);
        max_z = std::max(max_z, std::fabs(z));
        counts_ok = counts_ok && std::fabs(z) <= 3.0;
        out.records.push_back({{"object", strf("bridges edge %llu", (unsigned long long)e)},
                               {"exact", lambda * time_length},
                               {"estimate", mean},
                               {"stderr", std::sqrt(lambda * time_length / nd)},
                               {"z", z}});
    }

    const ChiSquareResult chi = chi_square_homogeneity(chain_hist, fresh_hist);
    out.records.push_back({{"object", "cluster count homogeneity"},
                           {"statistic", chi.statistic},
                           {"dof", chi.dof},
                           {"p_value", chi.p_value}});

    out.passed = counts_ok && chi.p_value >= 1e-3;
    out.detail = strf("max count |z| = %.2f, cluster-count chi-square p = %.4g over %llu sweeps",
                      max_z, chi.p_value, static_cast<unsigned long long>(sweeps));
    return out;
}

// ---------------------------------------------------------------- criterion 4

CriterionResult criterion_giant_cluster(ValidationLevel level, uint64_t seed, int workers) {
    CriterionResult out;
    out.index = 4;
    out.name = "complete-graph giant cluster vs branching fixed point";

    const bool full = level == ValidationLevel::Full;
    const uint32_t n = full ? 2000 : 1000;
    const uint64_t replicas = full ? 50 : 16;
    const double band = full ? 0.03 : 0.05;
    const double beta = 1.0;
    const uint64_t sub_seed = derived_seed(seed, 4);

    const double pi = survival_probability(beta, 2.0, 1.0, OffspringRate::Full);

    std::vector<double> super(replicas), sub(replicas);
    parallel_for(replicas, workers, [&](uint64_t r) {
        super[r] = simulate_complete_graph(n, beta, 2.0, 1, 0, 0, sub_seed, r).fraction;
        sub[r] = simulate_complete_graph(n, beta, 0.5, 1, 0, 0, sub_seed, 1000 + r).fraction;
    });

    const SummaryStats super_stats = summarize(super);
    const bool super_ok = std::fabs(super_stats.mean - beta * pi) <= band;
    uint64_t small = 0;
    for (double f : sub)
        if (f <= 0.05) ++small;
    const uint64_t needed =
        static_cast<uint64_t>(std::ceil(0.95 * static_cast<double>(replicas)));
    const bool sub_ok = small >= needed;

    out.records = {{"fixed_point_pi", pi},
                   {"supercritical_mean_fraction", super_stats.mean},
                   {"supercritical_stderr", super_stats.stderr_mean},
                   {"band", band},
                   {"subcritical_small_fraction_count", small},
                   {"subcritical_needed", needed},
                   {"replicas", replicas},
                   {"n", n}};
    out.passed = super_ok && sub_ok;
    out.detail = strf("mean M/n = %.4f vs beta*pi = %.4f (band %.2f); small subcritical "
                      "fraction in %llu/%llu replicas",
                      super_stats.mean, beta * pi, band, (unsigned long long)small,
                      (unsigned long long)replicas);
    return out;
}

// ---------------------------------------------------------------- criterion 5

CriterionResult criterion_branching(ValidationLevel level, uint64_t seed, int workers) {
    CriterionResult out;
    out.index = 5;
    out.name = "branching fixed point vs tree simulation";

    const uint64_t trees = level == ValidationLevel::Full ? 1000000 : 100000;
    const uint64_t sub_seed = derived_seed(seed, 5);
    const std::vector<std::pair<double, double>> grid = {
        {0.5, 4.0}, {1.0, 2.0}, {1.0, 3.0}, {2.0, 1.5}, {1.0, 0.9}, {2.0, 0.5}};

    out.records = json::array();
    bool ok = true;
    double max_z = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const auto [beta, lambda] = grid[i];
        const double fp = survival_probability(beta, lambda, 1.0, OffspringRate::Full);
        const BranchingEstimate sim = simulate_branching_survival(
            beta, lambda, 1.0, OffspringRate::Full, trees, sub_seed, i, workers);
        const double z = z_score(sim.probability, fp, sim.stderr_value);
        ok = ok && std::fabs(z) <= 3.0;
        max_z = std::max(max_z, std::fabs(z));
        out.records.push_back({{"object", strf("beta=%g lambda=%g", beta, lambda)},
                               {"exact", fp},
                               {"estimate", sim.probability},
                               {"stderr", sim.stderr_value},
                               {"z", z}});
    }
    out.passed = ok;
    out.detail = strf("6 grid points, max |z| = %.2f at %llu trees each", max_z,
                      (unsigned long long)trees);
    return out;
}

// ---------------------------------------------------------------- criterion 6

CriterionResult criterion_formulas(ValidationLevel level, uint64_t seed, int /*workers*/) {
    CriterionResult out;
    out.index = 6;
    out.name = "closed-form identities and the interval law";

    double worst_identity = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double beta = 0.1 + 0.5 * i;
            const double lambda = 0.05 + 0.8 * j;
            worst_identity =
                std::max(worst_identity, std::fabs(weighted_mean_family_size(beta, lambda, 1.0) -
                                                   mean_family_size(beta, lambda)));
        }
    const bool identity_ok = worst_identity <= 1e-14;

    double worst_critical = 0.0;
    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0})
        worst_critical =
            std::max(worst_critical, std::fabs(critical_lambda(beta, 2.0) - 2.0 / std::tanh(beta)));
    const bool critical_ok = worst_critical <= 1e-12;

    double worst_pmf = 0.0;
    for (double beta : {0.5, 1.0, 2.0})
        for (double q : {1.0, 1.5, 2.0, 3.0}) {
            double sum = 0.0;
            for (uint64_t k = 0; k <= 200; ++k) sum += cut_count_pmf(k, beta, q);
            worst_pmf = std::max(worst_pmf, std::fabs(sum - 1.0));
        }
    const bool pmf_ok = worst_pmf <= 1e-12;

    const uint64_t draws = level == ValidationLevel::Full ? 100000 : 20000;
    const double beta = 1.0;
    RngStream s1(derived_seed(seed, 61), StreamPurpose::Estimator, 0, 0);
    RngStream s2(derived_seed(seed, 62), StreamPurpose::Estimator, 0, 0);
    std::vector<double> a(draws), b(draws);
    for (uint64_t i = 0; i < draws; ++i) {
        a[i] = sample_weighted_interval(beta, 1.0, s1);
        b[i] = std::min(s2.next_exp(1.0) + s2.next_exp(1.0), beta);
    }
    const KsResult ks = ks_two_sample(std::move(a), std::move(b));
    const bool ks_ok = ks.p_value >= 1e-3;

    out.records = {{"identity_max_diff", worst_identity},
                   {"critical_lambda_max_diff", worst_critical},
                   {"pmf_sum_max_diff", worst_pmf},
                   {"ks_statistic", ks.statistic},
                   {"ks_p_value", ks.p_value},
                   {"ks_draws", draws}};
    out.passed = identity_ok && critical_ok && pmf_ok && ks_ok;
    out.detail = strf("identity diff %.2g, critical diff %.2g, pmf diff %.2g, interval KS p = %.4g",
                      worst_identity, worst_critical, worst_pmf, ks.p_value);
    return out;
}

// ---------------------------------------------------------------- criterion 7

CriterionResult criterion_critical_bracketing(ValidationLevel level, uint64_t seed, int workers) {
    CriterionResult out;
    out.index = 7;
    out.name = "one-dimensional critical bracketing";

    const uint64_t trials = level == ValidationLevel::Full ? 20000 : 2000;
    const Graph graph = Graph::path(17);
    const SpaceTimeBox box(graph, 16.0, Boundary::Free);
    const Point origin{8, 8.0};
    const std::vector<double> radii = {2, 3, 4, 5, 6, 7, 8};

    const std::vector<SurvivalCell> sub =
        radius_survival_curve(box, IntensityEnvironment::uniform(0.8, 1.0), origin, radii,
                              trials, derived_seed(seed, 71), false, workers);
    const std::vector<SurvivalCell> super =
        radius_survival_curve(box, IntensityEnvironment::uniform(1.2, 1.0), origin, radii,
                              trials, derived_seed(seed, 72), false, workers);

    out.records = json::array();
    for (size_t i = 0; i < radii.size(); ++i)
        out.records.push_back({{"radius", radii[i]},
                               {"subcritical", sub[i].frequency},
                               {"subcritical_stderr", sub[i].stderr_freq},
                               {"supercritical", super[i].frequency},
                               {"supercritical_stderr", super[i].stderr_freq}});

    // Headline thresholds 4, 6, 8 sit at indexes 2, 4, 6 of the fit grid.
    const std::vector<size_t> head = {2, 4, 6};
    bool ordered = true;
    std::vector<double> ratios;
    for (size_t i : head) {
        ordered = ordered && super[i].frequency > sub[i].frequency;
        ratios.push_back(sub[i].frequency > 0.0
                             ? super[i].frequency / sub[i].frequency
                             : std::numeric_limits<double>::infinity());
    }
    const bool widening = ratios[0] < ratios[1] && ratios[1] < ratios[2];
    const SurvivalCell& sub8 = sub[6];
    const SurvivalCell& super8 = super[6];
    const bool bands_split =
        super8.frequency - 1.96 * super8.stderr_freq > sub8.frequency + 1.96 * sub8.stderr_freq;

    bool slope_ok = false;
    double slope = 0.0, slope_hi = 0.0;
    bool positive_tail = true;
    for (const SurvivalCell& cell : sub) positive_tail = positive_tail && cell.successes > 0;
    if (positive_tail) {
        std::vector<double> xs, ys;
        for (const SurvivalCell& cell : sub) {
            xs.push_back(cell.threshold);
            ys.push_back(std::log(cell.frequency));
        }
        const LineFit fit = fit_line(xs, ys);
        slope = fit.slope;
        slope_hi = fit.slope + t_quantile_975(fit.n - 2) * fit.slope_stderr;
        slope_ok = slope_hi < 0.0;
        out.records.push_back({{"object", "subcritical log-survival slope"},
                               {"slope", slope},
                               {"upper_95", slope_hi}});
    }

    out.passed = ordered && widening && bands_split && positive_tail && slope_ok;
    out.detail = strf("ratio %.2f -> %.2f -> %.2f across R = 4,6,8; slope %.3f (95%% upper "
                      "%.3f); bands at R=8 %s",
                      ratios[0], ratios[1], ratios[2], slope, slope_hi,
                      bands_split ? "disjoint" : "overlap");
    return out;
}

// ---------------------------------------------------------------- criterion 8

CriterionResult criterion_entanglement(ValidationLevel, uint64_t, int /*workers*/) {
    CriterionResult out;
    out.index = 8;
    out.name = "entanglement entropy growth and reduction stability";

    const double lambda = 0.2, delta = 1.0;

    double entropy[7][4] = {};
    bool bounds_ok = true, monotone_ok = true;
    out.records = json::array();
    for (uint32_t L = 2; L <= 6; ++L)
        for (uint32_t m = 0; m <= 3; ++m) {
            const DensityOperator rho = ground_state_reduced_density(
                chain_segment_graph(L, m), lambda, delta, chain_segment_block(L, m));
            const double s = entanglement_entropy(rho);
            entropy[L][m] = s;
            bounds_ok = bounds_ok && s >= 0.0 && s <= double(L + 1) + 1e-9;
            out.records.push_back({{"object", strf("entropy L=%u m=%u", L, m)}, {"value", s}});
        }
    for (uint32_t m = 0; m <= 3; ++m)
        for (uint32_t L = 2; L < 6; ++L)
            monotone_ok = monotone_ok && entropy[L + 1][m] >= entropy[L][m] - 1e-9;

    double fitted = 0.0;
    for (uint32_t L = 2; L <= 4; ++L)
        for (uint32_t m = 0; m <= 3; ++m)
            fitted = std::max(fitted, entropy[L][m] / std::log2(double(L)));
    bool log_bound_ok = true;
    for (uint32_t L = 5; L <= 6; ++L)
        for (uint32_t m = 0; m <= 3; ++m)
            log_bound_ok = log_bound_ok && entropy[L][m] <= 1.05 * fitted * std::log2(double(L));

    std::vector<double> norms;
    bool norm_decreasing = true, norm_bounded = true;
    for (uint32_t m = 0; m <= 3; ++m) {
        const double d = norm_difference_exact(2, m, 4, lambda, delta);
        norm_bounded = norm_bounded && d <= 2.0 + 1e-9;
        if (m > 0) norm_decreasing = norm_decreasing && d < norms.back();
        norms.push_back(d);
        out.records.push_back({{"object", strf("norm difference m=%u vs 4 (L=2)", m)},
                               {"value", d}});
    }

    out.passed = bounds_ok && monotone_ok && log_bound_ok && norm_decreasing && norm_bounded;
    out.detail = strf("entropies in range, growth %s, log-slope cap %.3f, norm chain "
                      "%.2e -> %.2e %s",
                      monotone_ok ? "monotone" : "NON-MONOTONE", fitted, norms.front(),
                      norms.back(), norm_decreasing ? "decreasing" : "NON-DECREASING");
    return out;
}

// ---------------------------------------------------------------- criterion 9

// Deliberately naive re-derivation of the cluster partition: locate bridge
// endpoints by scanning, connect segments, BFS. Label order (first
// appearance) matches the production rule, so arrays must be equal.
uint32_t oracle_locate(const SegmentSet& segments, const SpaceTimeBox& box, uint32_t vertex,
                       double t) {
    const uint32_t b = segments.line_begin(vertex), e = segments.line_end(vertex);
    double tt = t;
    if (tt == segments.time_length() && box.periodic_line(vertex)) tt = 0.0;
    if (e == b + 1) return b;
    for (uint32_t i = b; i + 1 < e; ++i)
        if (tt >= segments[i].start && tt < segments[i + 1].start) return i;
    if (tt >= segments[e - 1].start) return e - 1;
    if (segments[e - 1].wraps && tt < segments[b].start) return e - 1;
    throw CorruptState("oracle: point not covered by any segment");
}

std::vector<uint32_t> oracle_components(const Configuration& config, const SpaceTimeBox& box,
                                        const SegmentSet& segments) {
    const uint32_t n = segments.size();
    std::vector<std::vector<uint32_t>> adjacency(n);
    for_each_bridge(config, box.graph(), [&](uint32_t x, uint32_t y, double t) {
        const uint32_t a = oracle_locate(segments, box, x, t);
        const uint32_t b = oracle_locate(segments, box, y, t);
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    });
    std::vector<uint32_t> component(n, UINT32_MAX);
    uint32_t next = 0;
    std::vector<uint32_t> stack;
    for (uint32_t s = 0; s < n; ++s) {
        if (component[s] != UINT32_MAX) continue;
        component[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const uint32_t u = stack.back();
            stack.pop_back();
            for (uint32_t v : adjacency[u])
                if (component[v] == UINT32_MAX) {
                    component[v] = next;
                    stack.push_back(v);
                }
        }
        ++next;
    }
    return component;
}

CriterionResult criterion_structure(ValidationLevel level, uint64_t seed, int /*workers*/) {
    CriterionResult out;
    out.index = 9;
    out.name = "structural invariants and determinism";

    const bool full = level == ValidationLevel::Full;
    const uint64_t configs = full ? 10000 : 2000;
    const uint64_t sub_seed = derived_seed(seed, 9);

    const std::vector<Graph> pool = {Graph::single_vertex(), Graph::path(2), Graph::path(3),
                                     Graph::cycle(4), Graph::complete(4)};

    uint64_t cluster_matches = 0;
    for (uint64_t i = 0; i < configs; ++i) {
        RngStream pick(sub_seed, StreamPurpose::Generic, 0xA11, i);
        const Graph& graph = pool[pick.next_below(pool.size())];
        const double time_length = 0.5 + 2.5 * pick.next_unit();
        const uint64_t kind = pick.next_below(3);
        SpaceTimeBox box = [&] {
            if (kind == 0) return SpaceTimeBox(graph, time_length, Boundary::Free);
            if (kind == 1) return SpaceTimeBox(graph, time_length, Boundary::PeriodicAll);
            std::vector<uint32_t> subset;
            const uint64_t bits = pick.next_u64();
            for (uint32_t v = 0; v < graph.vertex_count(); ++v)
                if (bits & (uint64_t{1} << v)) subset.push_back(v);
            return SpaceTimeBox(graph, time_length, subset);
        }();
        const double lambda = 2.0 * pick.next_unit();
        const double delta = 0.25 + 1.75 * pick.next_unit();
        const Configuration config =
            sample_configuration(box, IntensityEnvironment::uniform(lambda, delta), sub_seed, i);
        const ClusterLabeling labeling = build_clusters(config, box);
        const std::vector<uint32_t> oracle = oracle_components(config, box, labeling.segments);

        bool same = oracle == labeling.label;
        if (same) {
            std::vector<double> oracle_measure(labeling.cluster_count, 0.0);
            for (uint32_t s = 0; s < labeling.segments.size(); ++s)
                oracle_measure[oracle[s]] += labeling.segments[s].length;
            for (uint32_t c = 0; c < labeling.cluster_count; ++c)
                same = same && std::fabs(oracle_measure[c] - labeling.measure[c]) <=
                                   1e-12 * (1.0 + labeling.measure[c]);
        }
        if (same) ++cluster_matches;
    }
    const bool clusters_ok = cluster_matches == configs;

    const uint64_t directed_trials = configs / 10;
    uint64_t directed_contained = 0;
    for (uint64_t i = 0; i < directed_trials; ++i) {
        RngStream pick(sub_seed, StreamPurpose::Generic, 0xD12, i);
        const Graph& graph = pool[pick.next_below(pool.size())];
        const double time_length = 0.5 + 2.5 * pick.next_unit();
        const SpaceTimeBox box(graph, time_length,
                               pick.next_below(2) == 0 ? Boundary::Free : Boundary::PeriodicAll);
        const double lambda = 2.0 * pick.next_unit();
        const double delta = 0.25 + 1.75 * pick.next_unit();
        const Configuration config = sample_configuration(
            box, IntensityEnvironment::uniform(lambda, delta), sub_seed, 5000000 + i, true);
        const Point origin{static_cast<uint32_t>(pick.next_below(graph.vertex_count())),
                           pick.next_unit() * time_length};
        const DirectedReach reach = directed_reach(config, box, origin);
        const ClusterLabeling labeling = build_clusters(config, box);
        const ClusterInfo info = cluster_at(labeling, box, origin);
        const uint32_t origin_label = labeling.label_at(origin.vertex, origin.time);

        bool contained = reach.total_measure <= info.measure + 1e-9 &&
                         reach.radius <= info.radius + 1e-9;
        for (const ReachPiece& piece : reach.pieces) {
            double mid = piece.full_circle ? piece.entry : piece.entry + 0.5 * piece.length;
            if (mid >= time_length) mid -= time_length;
            contained = contained && labeling.label_at(piece.vertex, mid) == origin_label;
        }
        if (contained) ++directed_contained;
    }
    const bool directed_ok = directed_contained == directed_trials;

    uint64_t density_checks = 0;
    bool density_ok = true;
    for (const NamedGraph& g : graphs_up_to_three())
        for (const ModelPoint& p : model_points()) {
            const DensityOperator rho =
                gibbs_density(ising_hamiltonian(g.graph, p.lambda, p.delta), p.beta);
            std::vector<DensityOperator> produced;
            produced.push_back(rho);
            for (uint32_t v = 0; v < g.graph.vertex_count(); ++v)
                produced.push_back(reduced_density(rho, {v}));
            produced.push_back(ground_state_reduced_density(g.graph, p.lambda, p.delta, {0}));
            for (const DensityOperator& d : produced) {
                const Eigen::MatrixXd& m = d.matrix();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
                density_ok = density_ok &&
                             (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 &&
                             std::fabs(m.trace() - 1.0) <= 1e-10 &&
                             es.eigenvalues().minCoeff() >= -1e-10;
                ++density_checks;
            }
        }

    // End-to-end determinism, including independence from the worker count.
    bool determinism_ok = true;
    {
        const SpaceTimeBox box(Graph::path(3), 1.0, Boundary::PeriodicAll);
        RcParams params;
        params.q = 2;
        params.sweeps = 50;
        params.burnin = 10;
        const RcState s1 = sample_rc(box, params, sub_seed, 77);
        const RcState s2 = sample_rc(box, params, sub_seed, 77);
        determinism_ok = determinism_ok && s1.config.cuts == s2.config.cuts &&
                         s1.config.bridges == s2.config.bridges &&
                         s1.stream.counter() == s2.stream.counter();

        McParams mc;
        mc.sweeps = 640;
        mc.burnin = 64;
        mc.seed = sub_seed;
        const MatrixEstimate m1 = rc_density_matrix(Graph::path(2), 1.0, 1.0, 1.0, mc);
        const MatrixEstimate m2 = rc_density_matrix(Graph::path(2), 1.0, 1.0, 1.0, mc);
        determinism_ok = determinism_ok && (m1.values.array() == m2.values.array()).all() &&
                         (m1.errors.array() == m2.errors.array()).all();

        const BranchingEstimate b1 =
            simulate_branching_survival(1.0, 2.0, 1.0, OffspringRate::Full, 2000, sub_seed, 3, 1);
        const BranchingEstimate b2 =
            simulate_branching_survival(1.0, 2.0, 1.0, OffspringRate::Full, 2000, sub_seed, 3, 3);
        determinism_ok = determinism_ok && b1.probability == b2.probability;

        const Graph chain = Graph::path(9);
        const SpaceTimeBox big(chain, 8.0, Boundary::Free);
        const std::vector<double> radii = {2, 4};
        const auto c1 = radius_survival_curve(big, IntensityEnvironment::uniform(1.0, 1.0),
                                              Point{4, 4.0}, radii, 400, sub_seed, false, 1);
        const auto c2 = radius_survival_curve(big, IntensityEnvironment::uniform(1.0, 1.0),
                                              Point{4, 4.0}, radii, 400, sub_seed, false, 3);
        for (size_t i = 0; i < radii.size(); ++i)
            determinism_ok = determinism_ok && c1[i].successes == c2[i].successes;

        const double f1 = simulate_complete_graph(200, 1.0, 2.0, 1, 0, 0, sub_seed, 5).fraction;
        const double f2 = simulate_complete_graph(200, 1.0, 2.0, 1, 0, 0, sub_seed, 5).fraction;
        determinism_ok = determinism_ok && f1 == f2;
    }

    out.records = {{"cluster_oracle_matches", cluster_matches},
                   {"cluster_oracle_configs", configs},
                   {"directed_containment", directed_contained},
                   {"directed_trials", directed_trials},
                   {"density_operator_checks", density_checks},
                   {"density_invariants_ok", density_ok},
                   {"determinism_ok", determinism_ok}};
    out.passed = clusters_ok && directed_ok && density_ok && determinism_ok;
    out.detail = strf("%llu/%llu cluster oracles, %llu/%llu directed containments, %llu density "
                      "checks %s, determinism %s",
                      (unsigned long long)cluster_matches, (unsigned long long)configs,
                      (unsigned long long)directed_contained, (unsigned long long)directed_trials,
                      (unsigned long long)density_checks, density_ok ? "ok" : "FAILED",
                      determinism_ok ? "ok" : "FAILED");
    return out;
}

using CriterionFn = CriterionResult (*)(ValidationLevel, uint64_t, int);

struct CriterionEntry {
    int index;
    CriterionFn fn;
    double time_limit_seconds;  // 0 = no limit
};

const CriterionEntry kCriteria[] = {
    {1, criterion_density_elements, 600.0},
    {2, criterion_reduced_elements, 600.0},
    {3, criterion_single_color_reduction, 0.0},
    {4, criterion_giant_cluster, 900.0},
    {5, criterion_branching, 0.0},
    {6, criterion_formulas, 0.0},
    {7, criterion_critical_bracketing, 0.0},
    {8, criterion_entanglement, 300.0},
    {9, criterion_structure, 0.0},
};

}  // namespace

bool ValidationReport::all_passed() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.passed; });
}

ValidationReport run_acceptance(ValidationLevel level, uint64_t seed, int workers,
                                const std::vector<int>& subset) {
    ValidationReport report;
    report.level = level;
    report.seed = seed;
    for (const CriterionEntry& entry : kCriteria) {
        if (!subset.empty() &&
            std::find(subset.begin(), subset.end(), entry.index) == subset.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = entry.fn(level, seed, workers);
        } catch (const std::exception& ex) {
            result.index = entry.index;
            result.name = strf("criterion %d", entry.index);
            result.passed = false;
            result.detail = strf("exception: %s", ex.what());
        }
        result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (entry.time_limit_seconds > 0.0 && result.seconds > entry.time_limit_seconds) {
            result.passed = false;
            result.detail += strf(" [over the %.0f s limit]", entry.time_limit_seconds);
        }
        report.results.push_back(std::move(result));
    }
    return report;
}

}  // namespace stperc
