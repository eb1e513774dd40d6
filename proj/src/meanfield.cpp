#include "stperc/meanfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "stperc/clusters.hpp"
#include "stperc/configuration.hpp"
#include "stperc/errors.hpp"
#include "stperc/rc.hpp"
#include "stperc/stats.hpp"
#include "stperc/util.hpp"

namespace stperc {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidParameter("mean field: beta must be positive and finite");
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidParameter("mean field: lambda must be non-negative and finite");
}

void check_q(double q) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw InvalidParameter("mean field: q must be at least 1");
}

}  // namespace

double mean_family_size(double beta, double lambda) {
    check_beta(beta);
    check_lambda(lambda);
    const double eb = std::exp(-beta);
    return lambda * (2.0 * (1.0 - eb) - beta * eb);
}

double weighted_mean_family_size(double beta, double lambda, double q) {
    check_beta(beta);
    check_lambda(lambda);
    check_q(q);
    // Written with e^{-beta q} only, so the value stays finite for large beta
    // and reduces to mean_family_size operation by operation at q = 1.
    const double ebq = std::exp(-(beta * q));
    const double num = 2.0 * (1.0 - ebq) - beta * q * (2.0 - q) * ebq;
    const double den = 1.0 + (q - 1.0) * ebq;
    return lambda / (q * q) * (num / den);
}

double critical_lambda(double beta, double q) {
    check_beta(beta);
    check_q(q);
    const double ebq = std::exp(-(beta * q));
    const double num = 2.0 * (1.0 - ebq) - beta * q * (2.0 - q) * ebq;
    const double den = 1.0 + (q - 1.0) * ebq;
    return q * q * den / num;
}

double cut_count_normalizer(double beta, double q) {
    check_beta(beta);
    check_q(q);
    return (q - 1.0) * std::exp(-beta) + std::exp(beta * (q - 1.0));
}

double cut_count_pmf(uint64_t k, double beta, double q) {
    check_beta(beta);
    check_q(q);
    const double weight_exp = k == 0 ? 1.0 : static_cast<double>(k);
    const double log_p = -beta - std::log(cut_count_normalizer(beta, q)) +
                         weight_exp * std::log(q) + static_cast<double>(k) * std::log(beta) -
                         std::lgamma(static_cast<double>(k) + 1.0);
    return std::exp(log_p);
}

double mean_weighted_interval(double beta, double q) {
    return q * weighted_mean_family_size(beta, 1.0, q);
}

uint64_t sample_cut_count(double beta, double q, RngStream& stream) {
    check_beta(beta);
    check_q(q);
    const double u = stream.next_unit();
    double p = q * std::exp(-beta) / cut_count_normalizer(beta, q);
    double cdf = p;
    uint64_t k = 0;
    while (cdf < u) {
        // p_1 = p_0 beta / 1 and p_{k+1} = p_k q beta / (k+1) for k >= 1.
        p *= (k == 0 ? beta : q * beta / static_cast<double>(k + 1));
        cdf += p;
        ++k;
        if (k > 100000000) throw NumericError("cut count sampling did not terminate");
    }
    return k;
}

double sample_weighted_interval(double beta, double q, RngStream& stream) {
    const uint64_t k = sample_cut_count(beta, q, stream);
    if (k <= 1) return beta;
    double lo = beta, hi = 0.0;
    for (uint64_t i = 0; i < k; ++i) {
        const double u = stream.next_unit() * beta;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    return (beta - hi) + lo;
}

double offspring_rate_value(double lambda, double q, OffspringRate rate) {
    check_lambda(lambda);
    check_q(q);
    return rate == OffspringRate::Full ? lambda : lambda / q;
}

double survival_probability(double beta, double lambda, double q, OffspringRate rate) {
    check_beta(beta);
    const double r = offspring_rate_value(lambda, q, rate);
    if (r * mean_weighted_interval(beta, q) <= 1.0) return 0.0;

    // Interval law: an atom of mass pmf(0) + pmf(1) at beta, plus, for each
    // k >= 2, the arc around the reference point with density
    // k(k-1) (l/beta)(1 - l/beta)^{k-2} / beta.
    constexpr int kCells = 1 << 14;
    const double h = beta / kCells;
    double atom = cut_count_pmf(0, beta, q) + cut_count_pmf(1, beta, q);

    uint64_t k_max = 2;
    double mass = atom + cut_count_pmf(2, beta, q);
    while (1.0 - mass > 1e-15 && k_max < 100000) {
        ++k_max;
        mass += cut_count_pmf(k_max, beta, q);
    }

    std::vector<double> weight(kCells, 0.0), length(kCells, 0.0);
    for (int i = 0; i < kCells; ++i) length[i] = (i + 0.5) * h;
    for (uint64_t k = 2; k <= k_max; ++k) {
        const double pk = cut_count_pmf(k, beta, q);
        const double kk = static_cast<double>(k);
        for (int i = 0; i < kCells; ++i) {
            const double x = length[i] / beta;
            weight[i] += pk * kk * (kk - 1.0) * x * std::pow(1.0 - x, kk - 2.0) / beta * h;
        }
    }
    double total = atom;
    for (double w : weight) total += w;
    atom /= total;
    for (double& w : weight) w /= total;

    double pi = 1.0;
    for (int it = 0; it < 10000; ++it) {
        double expectation = atom * std::exp(-r * beta * pi);
        for (int i = 0; i < kCells; ++i) expectation += weight[i] * std::exp(-r * length[i] * pi);
        const double next = 0.5 * pi + 0.5 * (1.0 - expectation);
        const bool done = std::fabs(next - pi) < 1e-12;
        pi = next;
        if (done) return std::clamp(pi, 0.0, 1.0);
    }
    throw NumericError("survival probability: fixed point did not converge");
}

BranchingEstimate simulate_branching_survival(double beta, double lambda, double q,
                                              OffspringRate rate, uint64_t trees, uint64_t seed,
                                              uint64_t replica, int workers) {
    check_beta(beta);
    if (trees == 0) throw InvalidParameter("branching: need at least one tree");
    const double r = offspring_rate_value(lambda, q, rate);

    constexpr uint64_t kAliveCap = 64;
    constexpr uint64_t kBirthCap = 100000000;
    std::atomic<uint64_t> survived{0};
    parallel_for(trees, workers, [&](uint64_t tree) {
        RngStream stream(seed, StreamPurpose::Estimator, tree, replica);
        uint64_t alive = 1, births = 1;
        while (alive > 0 && alive < kAliveCap && births < kBirthCap) {
            const double len = sample_weighted_interval(beta, q, stream);
            const uint64_t children = stream.next_poisson(r * len);
            alive = alive - 1 + children;
            births += children;
        }
        if (alive > 0) survived.fetch_add(1, std::memory_order_relaxed);
    });

    BranchingEstimate est;
    est.trees = trees;
    est.probability = static_cast<double>(survived.load()) / static_cast<double>(trees);
    est.stderr_value = binomial_stderr(survived.load(), trees);
    return est;
}

namespace {

MeanFieldSample sample_from_labeling(uint32_t n, double beta, const ClusterLabeling& labeling) {
    MeanFieldSample sample;
    sample.n = n;
    sample.beta = beta;
    for (double m : labeling.measure) sample.largest_measure = std::max(sample.largest_measure, m);
    sample.fraction = sample.largest_measure / n;
    return sample;
}

void check_mean_field_size(uint32_t n, uint32_t q) {
    if (n == 0) throw InvalidParameter("mean field: n must be positive");
    if (q == 1 && n > 5000)
        throw CapacityError("mean field: direct sampling limited to n = 5000");
    if (q >= 2 && n > 500)
        throw CapacityError("mean field: the cluster-weighted chain is limited to n = 500");
}

}  // namespace

MeanFieldSample simulate_complete_graph(uint32_t n, double beta, double lambda, uint32_t q,
                                        uint64_t sweeps, uint64_t burnin, uint64_t seed,
                                        uint64_t replica) {
    check_beta(beta);
    check_lambda(lambda);
    if (q == 0) throw InvalidParameter("mean field: q must be at least 1");
    check_mean_field_size(n, q);
    const SpaceTimeBox box(Graph::complete(n), beta, Boundary::PeriodicAll);
    if (q == 1) {
        const IntensityEnvironment env = IntensityEnvironment::uniform(lambda / n, 1.0);
        const Configuration config = sample_configuration(box, env, seed, replica);
        return sample_from_labeling(n, beta, build_clusters(config, box));
    }
    RcParams params;
    params.lambda = lambda / n;
    params.delta = 1.0;
    params.q = q;
    params.sweeps = sweeps;
    params.burnin = burnin;
    const RcState state = sample_rc(box, params, seed, replica);
    return sample_from_labeling(n, beta, build_clusters(state.config, box));
}

std::vector<MeanFieldSample> simulate_complete_graph_coupled(uint32_t n, double beta,
                                                             const std::vector<double>& lambdas,
                                                             uint64_t seed, uint64_t replica) {
    check_beta(beta);
    if (lambdas.empty()) throw InvalidParameter("mean field: empty lambda list");
    for (size_t i = 0; i < lambdas.size(); ++i) {
        check_lambda(lambdas[i]);
        if (i > 0 && lambdas[i] < lambdas[i - 1])
            throw InvalidParameter("mean field: lambda list must be sorted ascending");
    }
    check_mean_field_size(n, 1);
    const SpaceTimeBox box(Graph::complete(n), beta, Boundary::PeriodicAll);
    const double envelope = lambdas.back();

    std::vector<MeanFieldSample> out;
    if (envelope == 0.0) {
        const IntensityEnvironment env = IntensityEnvironment::uniform(0.0, 1.0);
        const Configuration config = sample_configuration(box, env, seed, replica);
        const MeanFieldSample sample = sample_from_labeling(n, beta, build_clusters(config, box));
        out.assign(lambdas.size(), sample);
        return out;
    }

    const IntensityEnvironment env = IntensityEnvironment::uniform(envelope / n, 1.0);
    std::vector<double> factors;
    factors.reserve(lambdas.size());
    for (double l : lambdas) factors.push_back(l / envelope);
    const std::vector<Configuration> family =
        sample_thinned_family(box, env, factors, seed, replica);
    out.reserve(family.size());
    for (const Configuration& config : family)
        out.push_back(sample_from_labeling(n, beta, build_clusters(config, box)));
    return out;
}

MeanFieldSample sample_product_rc_model(uint32_t n, double beta, double lambda, double q,
                                        uint64_t seed, uint64_t replica) {
    check_beta(beta);
    check_lambda(lambda);
    check_q(q);
    if (n == 0) throw InvalidParameter("mean field: n must be positive");
    if (n > 5000) throw CapacityError("mean field: product model limited to n = 5000");

    const Graph graph = Graph::complete(n);
    const SpaceTimeBox box(graph, beta, Boundary::PeriodicAll);

    Configuration config;
    config.vertex_count = n;
    config.cuts.resize(n);
    for (uint32_t v = 0; v < n; ++v) {
        RngStream stream(seed, StreamPurpose::Cuts, v, replica);
        const uint64_t k = sample_cut_count(beta, q, stream);
        std::vector<double>& cuts = config.cuts[v];
        cuts.reserve(k);
        const auto interior_time = [&] {
            double t;
            do t = stream.next_unit() * beta;
            while (!(t > 0.0) || !(t < beta));
            return t;
        };
        for (uint64_t i = 0; i < k; ++i) cuts.push_back(interior_time());
        std::sort(cuts.begin(), cuts.end());
        while (std::adjacent_find(cuts.begin(), cuts.end()) != cuts.end()) {
            auto it = std::adjacent_find(cuts.begin(), cuts.end());
            *it = interior_time();
            std::sort(cuts.begin(), cuts.end());
        }
    }

    const double bridge_rate = n > 1 ? (lambda / q) / n : 0.0;
    const uint64_t edges = graph.edge_count();
    for (uint64_t e = 0; e < edges && bridge_rate > 0.0; ++e) {
        const auto [x, y] = graph.edge_endpoints(e);
        RngStream stream(seed, StreamPurpose::Bridges, e, replica);
        for (int attempt = 0;; ++attempt) {
            std::vector<double> times = sample_poisson_times(bridge_rate, beta, stream);
            const bool collides = std::any_of(times.begin(), times.end(), [&](double t) {
                return std::binary_search(config.cuts[x].begin(), config.cuts[x].end(), t) ||
                       std::binary_search(config.cuts[y].begin(), config.cuts[y].end(), t);
            });
            if (!collides) {
                if (!times.empty()) config.bridges.emplace(e, std::move(times));
                break;
            }
            if (attempt >= 100)
                throw CorruptState("product model: persistent bridge/cut collision");
        }
    }

    validate_configuration(config, box);
    return sample_from_labeling(n, beta, build_clusters(config, box));
}

}  // namespace stperc
