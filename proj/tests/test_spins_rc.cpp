#include <doctest.h>

#include <cmath>
#include <vector>

#include "stperc/clusters.hpp"
#include "stperc/configuration.hpp"
#include "stperc/environment.hpp"
#include "stperc/errors.hpp"
#include "stperc/graph.hpp"
#include "stperc/quantum.hpp"
#include "stperc/rc.hpp"
#include "stperc/rc_quantum.hpp"
#include "stperc/rng.hpp"
#include "stperc/spacetime.hpp"
#include "stperc/spins.hpp"
#include "stperc/stats.hpp"

using namespace stperc;

TEST_CASE("q = 1 coloring consumes no randomness and is all zero") {
    const SpaceTimeBox box(Graph::path(3), 1.0, Boundary::PeriodicAll);
    const Configuration c =
        sample_configuration(box, IntensityEnvironment::uniform(1.0, 1.0), 4, 0);
    const ClusterLabeling lab = build_clusters(c, box);
    RngStream stream(4, StreamPurpose::Coloring);
    const uint64_t before = stream.counter();
    const SpinField f = color_clusters(lab, 1, stream);
    CHECK(stream.counter() == before);
    CHECK(f.q == 1);
    for (const auto& line : f.lines)
        for (const SpinPiece& p : line) CHECK(p.spin == 0);
}

TEST_CASE("coloring is uniform over clusters and constant on them") {
    const SpaceTimeBox box(Graph::path(2), 1.0, Boundary::Free);
    const IntensityEnvironment env = IntensityEnvironment::uniform(0.8, 1.0);
    const uint32_t q = 4;
    std::vector<uint64_t> hist(q, 0);
    for (int r = 0; r < 8000; ++r) {
        const Configuration c = sample_configuration(box, env, 15, r);
        const ClusterLabeling lab = build_clusters(c, box);
        RngStream stream(15, StreamPurpose::Coloring, 0, r);
        const SpinField f = color_clusters(lab, q, stream);
        ++hist[f.spin_at(0, 0.3)];
        // constancy: every segment of the cluster holding (0, 0.3) shows the
        // same spin at its start
        const uint32_t label = lab.label_at(0, 0.3);
        const uint32_t spin = f.spin_at(0, 0.3);
        for (uint32_t s = 0; s < lab.segments.size(); ++s)
            if (lab.label[s] == label)
                CHECK(f.spin_at(lab.segments[s].vertex, lab.segments[s].start) == spin);
    }
    const std::vector<double> uniform(q, 1.0 / q);
    CHECK(chi_square_gof(hist, uniform).p_value > 1e-3);
}

TEST_CASE("spin lookups respect wrapping and the free endpoint") {
    SpinField f;
    f.q = 2;
    f.time_length = 1.0;
    f.lines.resize(2);
    f.lines[0] = {{0.25, 0.5, false, false, 1}, {0.75, 0.5, true, false, 0}};
    f.lines[1] = {{0.0, 0.6, false, false, 1}, {0.6, 0.4, false, false, 0}};
    CHECK(f.spin_at(0, 0.3) == 1);
    CHECK(f.spin_at(0, 0.1) == 0);   // inside the wrap piece
    CHECK(f.spin_at(0, 1.0) == f.spin_at(0, 0.0));
    CHECK(f.spin_at(1, 0.6) == 0);   // right-continuous
    CHECK(f.spin_at(1, 1.0) == 0);   // free end reads the final piece
}

TEST_CASE("spin density statistics on hand-built fields") {
    const Graph g = Graph::path(2);
    SpinField f;
    f.q = 2;
    f.time_length = 1.0;
    f.lines.resize(2);
    f.lines[0] = {{0.0, 0.5, false, false, 0}, {0.5, 0.5, false, false, 1}};
    f.lines[1] = {{0.0, 1.0, false, false, 0}};
    const SpinDensityStats s = spin_density_stats(f, g);
    CHECK(s.agreement_measure == doctest::Approx(0.5));
    CHECK(s.jump_count == 1);

    f.lines[0] = {{0.0, 1.0, false, false, 0}};
    const SpinDensityStats all = spin_density_stats(f, g);
    CHECK(all.agreement_measure == doctest::Approx(1.0));
    CHECK(all.jump_count == 0);
}

TEST_CASE("chains are deterministic and their states stay consistent") {
    const SpaceTimeBox box(Graph::path(3), 1.5, Boundary::PeriodicAll);
    RcParams params;
    params.lambda = 1.2;
    params.delta = 0.9;
    params.q = 3;
    params.sweeps = 40;
    params.burnin = 5;
    const RcState a = sample_rc(box, params, 100, 2);
    const RcState b = sample_rc(box, params, 100, 2);
    CHECK(a.config.cuts == b.config.cuts);
    CHECK(a.config.bridges == b.config.bridges);
    CHECK(a.stream.counter() == b.stream.counter());
    CHECK(a.sweep_index == 45);
    validate_configuration(a.config, box);

    // every sweep output must colour clusters constantly; the next sweep's
    // consistency guard would throw otherwise
    RcState c = a;
    CHECK_NOTHROW(sw_sweep(c));

    RcState tampered = a;
    tampered.spins.lines[0][0].spin = params.q + 1;
    CHECK_THROWS_AS(sw_sweep(tampered), CorruptState);
}

TEST_CASE("single-vertex end spins follow the exact two-state law") {
    // P(bottom = top) for one line of length beta with cut rate delta equals
    // 1 / (1 + tanh(beta * delta)) by exact diagonalization of the two-state
    // generator; beta = delta = 1 here.
    const SpaceTimeBox box(Graph::single_vertex(), 1.0, Boundary::Free);
    RcParams params;
    params.lambda = 0.0;
    params.delta = 1.0;
    params.q = 2;
    params.sweeps = 1;
    params.burnin = 0;
    RcState state = rc_initial_state(box, params, 60, 0);
    uint64_t equal = 0;
    const uint64_t sweeps = 20000;
    for (uint64_t i = 0; i < sweeps; ++i) {
        sw_sweep(state);
        equal += state.spins.spin_at(0, 0.0) == state.spins.spin_at(0, 1.0) ? 1 : 0;
    }
    const double freq = double(equal) / double(sweeps);
    const double exact = 0.56766764161830635;
    CHECK(std::fabs(freq - exact) < 4.5 * std::sqrt(exact * (1 - exact) / double(sweeps)));
}

TEST_CASE("two-vertex end-spin joint law matches exact diagonalization") {
    const Graph g = Graph::path(2);
    const double lambda = 1.0, delta = 1.0, beta = 1.0;
    const SpaceTimeBox box(g, beta, Boundary::Free);
    RcParams params;
    params.lambda = lambda;
    params.delta = delta;
    params.q = 2;
    params.sweeps = 1;
    params.burnin = 0;

    const Eigen::MatrixXd rho =
        gibbs_density(ising_hamiltonian(g, lambda, delta), beta).matrix();
    const double total = rho.sum();
    std::vector<double> probs;
    for (int bottom = 0; bottom < 4; ++bottom)
        for (int top = 0; top < 4; ++top) probs.push_back(rho(bottom, top) / total);

    RcState state = rc_initial_state(box, params, 61, 0);
    std::vector<uint64_t> counts(16, 0);
    const uint64_t sweeps = 6000;
    for (uint64_t i = 0; i < sweeps; ++i) {
        sw_sweep(state);
        uint32_t bottom = 0, top = 0;
        for (uint32_t v = 0; v < 2; ++v) {
            bottom |= (state.spins.spin_at(v, 0.0) == 1 ? 1u : 0u) << v;
            top |= (state.spins.spin_at(v, beta) == 1 ? 1u : 0u) << v;
        }
        ++counts[bottom * 4 + top];
    }
    CHECK(chi_square_gof(counts, probs).p_value > 1e-3);
}

TEST_CASE("density-matrix estimates carry usable error bars") {
    McParams mc;
    mc.sweeps = 20000;
    mc.burnin = 200;
    mc.seed = 62;
    const MatrixEstimate est = rc_density_matrix(Graph::single_vertex(), 0.0, 1.0, 1.0, mc);
    REQUIRE(est.values.rows() == 2);
    // sum of all elements is 1 / P(bottom = top) = 1 + tanh(1)
    const double sum = est.values.sum();
    CHECK(std::fabs(sum - 1.7615941559557649) < 0.03);
    CHECK(est.errors.minCoeff() > 0.0);
    // diagonal elements share the denominator with themselves: both are
    // estimates of cosh / (cosh + sinh) scaled ratios, and symmetry holds in
    // expectation
    CHECK(std::fabs(est.values(0, 1) - est.values(1, 0)) <
          5.0 * (est.errors(0, 1) + est.errors(1, 0)));

    McParams bad = mc;
    bad.batches = 0;
    CHECK_THROWS_AS(rc_density_matrix(Graph::single_vertex(), 0.0, 1.0, 1.0, bad),
                    InvalidParameter);
}

TEST_CASE("reduced estimates use the partial periodic geometry") {
    // keep = all vertices must agree with the plain estimator's law
    const Graph g = Graph::path(2);
    McParams mc;
    mc.sweeps = 4000;
    mc.burnin = 100;
    mc.seed = 63;
    const MatrixEstimate full = rc_reduced_density_matrix(g, 1.0, 1.0, 1.0, {0, 1}, mc);
    const MatrixEstimate plain = rc_density_matrix(g, 1.0, 1.0, 1.0, mc);
    REQUIRE(full.values.rows() == 4);
    // identical geometry, seed and stream layout: the chains coincide sweep
    // by sweep, so the estimates are bit-equal
    CHECK((full.values.array() == plain.values.array()).all());

    const MatrixEstimate part = rc_reduced_density_matrix(g, 1.0, 1.0, 1.0, {1}, mc);
    REQUIRE(part.values.rows() == 2);
    const Eigen::MatrixXd exact =
        reduced_density(gibbs_density(ising_hamiltonian(g, 1.0, 1.0), 1.0), {1}).matrix();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const double err = std::max(part.errors(r, c), 1e-12);
            CHECK(std::fabs(part.values(r, c) - exact(r, c)) < 5.0 * err);
        }
}

TEST_CASE("invalid chain parameters are rejected") {
    const SpaceTimeBox box(Graph::path(2), 1.0, Boundary::Free);
    RcParams params;
    params.delta = 0.0;
    CHECK_THROWS_AS(rc_initial_state(box, params, 0, 0), InvalidParameter);
    params.delta = 1.0;
    params.q = 0;
    CHECK_THROWS_AS(rc_initial_state(box, params, 0, 0), InvalidParameter);
    params.q = 1;
    params.sweeps = 0;
    CHECK_THROWS_AS(rc_initial_state(box, params, 0, 0), InvalidParameter);
}
