#include "stperc/rc_quantum.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "stperc/errors.hpp"
#include "stperc/quantum.hpp"
#include "stperc/rc.hpp"
#include "stperc/spacetime.hpp"

namespace stperc {

void validate_mc_params(const McParams& mc) {
    if (mc.sweeps == 0) throw InvalidParameter("mc: sweeps must be positive");
    if (mc.batches < 2) throw InvalidParameter("mc: need at least 2 batches");
    if (mc.sweeps < mc.batches) throw InvalidParameter("mc: fewer sweeps than batches");
}

namespace {

constexpr size_t kTrackedCap = 6;

void check_rates(double lambda, double delta, double beta) {
    if (!(lambda >= 0.0) || !(delta > 0.0))
        throw InvalidParameter("density estimation: need lambda >= 0 and delta > 0");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidParameter("density estimation: beta must be positive and finite");
}

void check_tracked(uint32_t vertex_count, const std::vector<uint32_t>& tracked) {
    if (tracked.empty()) throw InvalidParameter("density estimation: empty vertex set");
    if (tracked.size() > kTrackedCap)
        throw CapacityError("density estimation: matrices limited to " +
                            std::to_string(kTrackedCap) + " tracked vertices");
    for (size_t i = 0; i < tracked.size(); ++i) {
        if (tracked[i] >= vertex_count)
            throw InvalidParameter("density estimation: vertex out of range");
        if (i > 0 && tracked[i] <= tracked[i - 1])
            throw InvalidParameter("density estimation: vertices must be sorted and distinct");
    }
}

// Per-batch counts of (bottom end spins, top end spins) pairs, as basis
// indices over the tracked vertices.
struct BatchCounts {
    uint64_t dim = 0;
    uint32_t batches = 0;
    std::vector<double> counts;

    double get(uint32_t b, uint64_t eta0, uint64_t eta1) const {
        return counts[(uint64_t{b} * dim + eta0) * dim + eta1];
    }
    double diagonal_total(uint32_t b) const {
        double s = 0.0;
        for (uint64_t e = 0; e < dim; ++e) s += get(b, e, e);
        return s;
    }
};

BatchCounts run_end_spin_counts(const SpaceTimeBox& box, const std::vector<uint32_t>& tracked,
                                double lambda, double delta, const McParams& mc) {
    validate_mc_params(mc);
    check_tracked(box.graph().vertex_count(), tracked);

    RcParams params;
    params.lambda = lambda;
    params.delta = delta;
    params.q = 2;
    params.sweeps = mc.sweeps;
    params.burnin = mc.burnin;

    BatchCounts out;
    out.dim = uint64_t{1} << tracked.size();
    out.batches = mc.batches;
    out.counts.assign(out.dim * out.dim * mc.batches, 0.0);

    RcState state = rc_initial_state(box, params, mc.seed, mc.replica);
    for (uint64_t i = 0; i < mc.burnin; ++i) sw_sweep(state);
    const double top = box.time_length();
    for (uint64_t i = 0; i < mc.sweeps; ++i) {
        sw_sweep(state);
        uint64_t eta0 = 0, eta1 = 0;
        for (size_t j = 0; j < tracked.size(); ++j) {
            if (state.spins.spin_at(tracked[j], 0.0) == 1) eta0 |= uint64_t{1} << j;
            if (state.spins.spin_at(tracked[j], top) == 1) eta1 |= uint64_t{1} << j;
        }
        const uint32_t b = static_cast<uint32_t>(i * mc.batches / mc.sweeps);
        out.counts[(uint64_t{b} * out.dim + eta0) * out.dim + eta1] += 1.0;
    }
    return out;
}

MatrixEstimate ratios_from_counts(const BatchCounts& counts, uint64_t sweeps) {
    std::vector<double> den(counts.batches), num(counts.batches);
    for (uint32_t b = 0; b < counts.batches; ++b) den[b] = counts.diagonal_total(b);
    MatrixEstimate est;
    est.sweeps = sweeps;
    est.values = Eigen::MatrixXd::Zero(counts.dim, counts.dim);
    est.errors = Eigen::MatrixXd::Zero(counts.dim, counts.dim);
    for (uint64_t r = 0; r < counts.dim; ++r)
        for (uint64_t c = 0; c < counts.dim; ++c) {
            for (uint32_t b = 0; b < counts.batches; ++b) num[b] = counts.get(b, r, c);
            const RatioEstimate ratio = batch_ratio(num, den);
            est.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = ratio.value;
            est.errors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                ratio.stderr_value;
        }
    return est;
}

RatioEstimate element_from_counts(const BatchCounts& counts, uint64_t eta, uint64_t eta_prime) {
    if (eta >= counts.dim || eta_prime >= counts.dim)
        throw InvalidParameter("density element: basis index out of range");
    std::vector<double> den(counts.batches), num(counts.batches);
    for (uint32_t b = 0; b < counts.batches; ++b) {
        den[b] = counts.diagonal_total(b);
        num[b] = counts.get(b, eta, eta_prime);
    }
    return batch_ratio(num, den);
}

std::vector<uint32_t> all_vertices(const Graph& graph) {
    std::vector<uint32_t> all(graph.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    return all;
}

std::vector<uint32_t> complement_of(uint32_t vertex_count, const std::vector<uint32_t>& keep) {
    std::vector<uint32_t> rest;
    size_t j = 0;
    for (uint32_t v = 0; v < vertex_count; ++v) {
        if (j < keep.size() && keep[j] == v)
            ++j;
        else
            rest.push_back(v);
    }
    return rest;
}

}  // namespace

MatrixEstimate rc_density_matrix(const Graph& graph, double lambda, double delta, double beta,
                                 const McParams& mc) {
    check_rates(lambda, delta, beta);
    const SpaceTimeBox box(graph, beta, Boundary::Free);
    const BatchCounts counts = run_end_spin_counts(box, all_vertices(graph), lambda, delta, mc);
    return ratios_from_counts(counts, mc.sweeps);
}

RatioEstimate rc_density_element(const Graph& graph, double lambda, double delta, double beta,
                                 uint64_t eta, uint64_t eta_prime, const McParams& mc) {
    check_rates(lambda, delta, beta);
    const SpaceTimeBox box(graph, beta, Boundary::Free);
    const BatchCounts counts = run_end_spin_counts(box, all_vertices(graph), lambda, delta, mc);
    return element_from_counts(counts, eta, eta_prime);
}

MatrixEstimate rc_reduced_density_matrix(const Graph& graph, double lambda, double delta,
                                         double beta, const std::vector<uint32_t>& keep,
                                         const McParams& mc) {
    check_rates(lambda, delta, beta);
    check_tracked(graph.vertex_count(), keep);
    const SpaceTimeBox box(graph, beta, complement_of(graph.vertex_count(), keep));
    const BatchCounts counts = run_end_spin_counts(box, keep, lambda, delta, mc);
    return ratios_from_counts(counts, mc.sweeps);
}

RatioEstimate rc_reduced_element(const Graph& graph, double lambda, double delta, double beta,
                                 const std::vector<uint32_t>& keep, uint64_t eta,
                                 uint64_t eta_prime, const McParams& mc) {
    check_rates(lambda, delta, beta);
    check_tracked(graph.vertex_count(), keep);
    const SpaceTimeBox box(graph, beta, complement_of(graph.vertex_count(), keep));
    const BatchCounts counts = run_end_spin_counts(box, keep, lambda, delta, mc);
    return element_from_counts(counts, eta, eta_prime);
}

Graph chain_segment_graph(uint32_t L, uint32_t m) {
    return Graph::path(2 * m + L + 1);
}

std::vector<uint32_t> chain_segment_block(uint32_t L, uint32_t m) {
    std::vector<uint32_t> block(L + 1);
    std::iota(block.begin(), block.end(), m);
    return block;
}

double norm_difference_exact(uint32_t L, uint32_t m, uint32_t n, double lambda, double delta) {
    if (m > n) throw InvalidParameter("norm difference: need m <= n");
    const DensityOperator rho_m = ground_state_reduced_density(
        chain_segment_graph(L, m), lambda, delta, chain_segment_block(L, m));
    const DensityOperator rho_n = ground_state_reduced_density(
        chain_segment_graph(L, n), lambda, delta, chain_segment_block(L, n));
    return spectral_norm(rho_m.matrix() - rho_n.matrix());
}

namespace {

Eigen::MatrixXd ratio_matrix_leaving_out(const BatchCounts& counts, int skip) {
    double den = 0.0;
    for (uint32_t b = 0; b < counts.batches; ++b)
        if (static_cast<int>(b) != skip) den += counts.diagonal_total(b);
    if (den == 0.0)
        throw InsufficientData("norm difference: no sweep had matching end spins");
    Eigen::MatrixXd out(counts.dim, counts.dim);
    for (uint64_t r = 0; r < counts.dim; ++r)
        for (uint64_t c = 0; c < counts.dim; ++c) {
            double num = 0.0;
            for (uint32_t b = 0; b < counts.batches; ++b)
                if (static_cast<int>(b) != skip) num += counts.get(b, r, c);
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = num / den;
        }
    return out;
}

// The exact matrices are symmetric, so symmetrizing the estimates only
// removes sampling noise.
double symmetric_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::MatrixXd diff = a - b;
    return spectral_norm(0.5 * (diff + diff.transpose()));
}

}  // namespace

RatioEstimate norm_difference_mc(uint32_t L, uint32_t m, uint32_t n, double lambda,
                                 double delta, double beta, const McParams& mc) {
    if (m > n) throw InvalidParameter("norm difference: need m <= n");
    check_rates(lambda, delta, beta);
    validate_mc_params(mc);

    McParams mc_m = mc;
    mc_m.replica = 2 * mc.replica;
    McParams mc_n = mc;
    mc_n.replica = 2 * mc.replica + 1;

    const Graph graph_m = chain_segment_graph(L, m);
    const Graph graph_n = chain_segment_graph(L, n);
    const std::vector<uint32_t> block_m = chain_segment_block(L, m);
    const std::vector<uint32_t> block_n = chain_segment_block(L, n);
    check_tracked(graph_m.vertex_count(), block_m);
    check_tracked(graph_n.vertex_count(), block_n);
    const SpaceTimeBox box_m(graph_m, beta, complement_of(graph_m.vertex_count(), block_m));
    const SpaceTimeBox box_n(graph_n, beta, complement_of(graph_n.vertex_count(), block_n));
    const BatchCounts counts_m = run_end_spin_counts(box_m, block_m, lambda, delta, mc_m);
    const BatchCounts counts_n = run_end_spin_counts(box_n, block_n, lambda, delta, mc_n);

    RatioEstimate out;
    out.value = symmetric_norm(ratio_matrix_leaving_out(counts_m, -1),
                               ratio_matrix_leaving_out(counts_n, -1));
    std::vector<double> loo(mc.batches);
    double mean = 0.0;
    for (uint32_t b = 0; b < mc.batches; ++b) {
        loo[b] = symmetric_norm(ratio_matrix_leaving_out(counts_m, static_cast<int>(b)),
                                ratio_matrix_leaving_out(counts_n, static_cast<int>(b)));
        mean += loo[b];
    }
    mean /= mc.batches;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    out.stderr_value = std::sqrt(ss * (mc.batches - 1.0) / mc.batches);
    return out;
}

}  // namespace stperc
