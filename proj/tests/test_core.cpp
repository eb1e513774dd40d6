#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "stperc/configuration.hpp"
#include "stperc/environment.hpp"
#include "stperc/errors.hpp"
#include "stperc/graph.hpp"
#include "stperc/rng.hpp"
#include "stperc/spacetime.hpp"
#include "stperc/stats.hpp"
#include "stperc/util.hpp"

using namespace stperc;

TEST_CASE("streams are deterministic and disjoint") {
    RngStream a(42, StreamPurpose::Cuts, 3, 7);
    RngStream b(42, StreamPurpose::Cuts, 3, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42, StreamPurpose::Cuts, 3, 8);
    RngStream d(42, StreamPurpose::Bridges, 3, 7);
    RngStream e(43, StreamPurpose::Cuts, 3, 7);
    const uint64_t first = RngStream(42, StreamPurpose::Cuts, 3, 7).next_u64();
    CHECK(c.next_u64() != first);
    CHECK(d.next_u64() != first);
    CHECK(e.next_u64() != first);
}

TEST_CASE("restore resumes a stream exactly") {
    RngStream s(9, StreamPurpose::Chain, 0, 2);
    for (int i = 0; i < 17; ++i) s.next_unit();
    s.next_gaussian();
    s.next_poisson(3.5);
    RngStream r = RngStream::restore(s.key(), s.counter());
    for (int i = 0; i < 50; ++i) CHECK(r.next_u64() == s.next_u64());
}

TEST_CASE("uniform draws stay inside their ranges") {
    RngStream s(1, StreamPurpose::Generic);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        const double v = s.next_unit_pos();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        const uint64_t k = s.next_below(6);
        CHECK(k < 6);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("draw moments match their distributions") {
    RngStream s(11, StreamPurpose::Generic);
    const int n = 200000;
    double su = 0, se = 0, sg = 0, sg2 = 0, sp = 0;
    for (int i = 0; i < n; ++i) {
        su += s.next_unit();
        se += s.next_exp(2.0);
        const double g = s.next_gaussian();
        sg += g;
        sg2 += g * g;
        sp += double(s.next_poisson(4.0));
    }
    const double rn = std::sqrt(double(n));
    CHECK(std::fabs(su / n - 0.5) < 4.0 / (std::sqrt(12.0) * rn));
    CHECK(std::fabs(se / n - 0.5) < 4.0 * 0.5 / rn);
    CHECK(std::fabs(sg / n) < 4.0 / rn);
    CHECK(std::fabs(sg2 / n - 1.0) < 4.0 * std::sqrt(2.0) / rn);
    CHECK(std::fabs(sp / n - 4.0) < 4.0 * 2.0 / rn);
}

TEST_CASE("poisson times are sorted, interior and have the right mean count") {
    RngStream s(5, StreamPurpose::Cuts, 0, 0);
    CHECK(sample_poisson_times(0.0, 3.0, s).empty());
    uint64_t total = 0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const std::vector<double> ts = sample_poisson_times(2.5, 2.0, s);
        total += ts.size();
        for (size_t j = 0; j < ts.size(); ++j) {
            CHECK(ts[j] > 0.0);
            CHECK(ts[j] < 2.0);
            if (j) CHECK(ts[j] > ts[j - 1]);
        }
    }
    const double mean = double(total) / reps;
    CHECK(std::fabs(mean - 5.0) < 4.0 * std::sqrt(5.0 / reps));
}

TEST_CASE("graph constructors and edge ids") {
    const Graph p = Graph::path(4);
    CHECK(p.vertex_count() == 4);
    CHECK(p.edge_count() == 3);
    CHECK(p.edge_endpoints(1) == std::pair<uint32_t, uint32_t>{1, 2});
    CHECK(p.edge_id(2, 1) == 1);
    CHECK(p.has_edge(0, 1));
    CHECK(!p.has_edge(0, 2));
    const std::vector<uint32_t> dist = p.bfs_distances(0);
    CHECK(dist == std::vector<uint32_t>{0, 1, 2, 3});

    const Graph c = Graph::cycle(5);
    CHECK(c.edge_count() == 5);
    CHECK(c.bfs_distances(0)[3] == 2);

    const Graph k = Graph::complete(4);
    CHECK(k.edge_count() == 6);
    CHECK(k.has_edge(1, 3));

    const Graph s = Graph::single_vertex();
    CHECK(s.vertex_count() == 1);
    CHECK(s.edge_count() == 0);

    const Graph f = Graph::from_edges(3, {{2, 1}, {0, 1}});
    CHECK(f.edge_count() == 2);
    CHECK(f.edge_endpoints(0) == std::pair<uint32_t, uint32_t>{0, 1});
    CHECK(f.edge_endpoints(1) == std::pair<uint32_t, uint32_t>{1, 2});
}

TEST_CASE("implicit complete graphs answer id queries without edge lists") {
    const Graph k = Graph::complete(100);
    CHECK(k.edge_count() == 4950);
    const uint64_t id = k.edge_id(7, 42);
    CHECK(k.edge_endpoints(id) == std::pair<uint32_t, uint32_t>{7, 42});
    CHECK(k.has_edge(0, 99));
    CHECK_THROWS_AS(k.adjacency(), CapacityError);
}

TEST_CASE("disconnected or malformed graphs are rejected") {
    CHECK_THROWS_AS(Graph::from_edges(4, {{0, 1}, {2, 3}}), InvalidParameter);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0}}), InvalidParameter);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}), InvalidParameter);
}

TEST_CASE("box boundary classification") {
    const Graph g = Graph::path(3);
    const SpaceTimeBox free(g, 2.0, Boundary::Free);
    CHECK(!free.periodic_line(0));
    const SpaceTimeBox all(g, 2.0, Boundary::PeriodicAll);
    CHECK(all.periodic_line(2));
    const SpaceTimeBox some(g, 2.0, std::vector<uint32_t>{1});
    CHECK(!some.periodic_line(0));
    CHECK(some.periodic_line(1));
    CHECK(canonical_time(all, 0, 2.0) == 0.0);
    CHECK(canonical_time(free, 0, 2.0) == 2.0);
    CHECK_THROWS_AS(SpaceTimeBox(g, 0.0, Boundary::Free), InvalidParameter);
    CHECK_THROWS_AS(validate_point(free, Point{3, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(validate_point(free, Point{0, 2.5}), InvalidParameter);
}

TEST_CASE("configuration sampling is valid, deterministic and has Poisson counts") {
    const Graph g = Graph::cycle(4);
    const SpaceTimeBox box(g, 1.5, Boundary::PeriodicAll);
    const IntensityEnvironment env = IntensityEnvironment::uniform(1.3, 0.8);

    const Configuration c1 = sample_configuration(box, env, 77, 5);
    const Configuration c2 = sample_configuration(box, env, 77, 5);
    CHECK(c1.cuts == c2.cuts);
    CHECK(c1.bridges == c2.bridges);

    uint64_t cuts = 0, bridges = 0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
        const Configuration c = sample_configuration(box, env, 77, r);
        validate_configuration(c, box);
        cuts += c.total_cuts();
        bridges += c.total_bridges();
    }
    const double cut_mean = 4 * 0.8 * 1.5;  // lines * delta * T
    const double bridge_mean = 4 * 1.3 * 1.5;
    CHECK(std::fabs(double(cuts) / reps - cut_mean) < 4 * std::sqrt(cut_mean / reps));
    CHECK(std::fabs(double(bridges) / reps - bridge_mean) < 4 * std::sqrt(bridge_mean / reps));
}

TEST_CASE("directed sampling keys bridges by orientation") {
    const Graph g = Graph::path(2);
    const SpaceTimeBox box(g, 4.0, Boundary::Free);
    const IntensityEnvironment env = IntensityEnvironment::uniform(2.0, 0.5);
    const Configuration c = sample_configuration(box, env, 3, 0, true);
    CHECK(c.directed);
    validate_configuration(c, box);
    for (const auto& [key, times] : c.bridges) {
        CHECK(key < 2);  // one edge, two orientations
        CHECK(!times.empty());
    }
    uint64_t undirected = 0, directed = 0;
    for (int r = 0; r < 2000; ++r) {
        undirected += sample_configuration(box, env, 3, r, false).total_bridges();
        directed += sample_configuration(box, env, 3, r, true).total_bridges();
    }
    // each orientation carries the full rate, so directed mode doubles counts
    const double ratio = double(directed) / double(undirected);
    CHECK(std::fabs(ratio - 2.0) < 0.1);
}

TEST_CASE("thinned families are nested and share cuts") {
    const Graph g = Graph::complete(4);
    const SpaceTimeBox box(g, 2.0, Boundary::Free);
    const IntensityEnvironment env = IntensityEnvironment::uniform(1.5, 1.0);
    const std::vector<double> factors = {0.25, 0.7, 1.0};
    for (int r = 0; r < 200; ++r) {
        const std::vector<Configuration> family =
            sample_thinned_family(box, env, factors, 10, r);
        REQUIRE(family.size() == 3);
        for (const Configuration& c : family) validate_configuration(c, box);
        CHECK(family[0].cuts == family[1].cuts);
        CHECK(family[1].cuts == family[2].cuts);
        for (size_t i = 0; i + 1 < family.size(); ++i)
            for (const auto& [edge, times] : family[i].bridges) {
                const auto it = family[i + 1].bridges.find(edge);
                REQUIRE(it != family[i + 1].bridges.end());
                for (double t : times)
                    CHECK(std::binary_search(it->second.begin(), it->second.end(), t));
            }
    }
}

TEST_CASE("time rescaling maps cuts linearly") {
    const Graph g = Graph::single_vertex();
    const SpaceTimeBox box(g, 2.0, Boundary::Free);
    Configuration c;
    c.vertex_count = 1;
    c.cuts = {{0.5, 1.0}};
    const auto [scaled, scaled_box] = rescale_time(c, box, 2.0);
    CHECK(scaled_box.time_length() == 4.0);
    CHECK(scaled.cuts[0] == std::vector<double>{1.0, 2.0});
}

TEST_CASE("environments: uniform, quenched, scaled, sampled") {
    const IntensityEnvironment u = IntensityEnvironment::uniform(2.0, 0.5);
    CHECK(u.uniform_rates());
    CHECK(u.bridge_rate(17) == 2.0);
    CHECK(u.cut_rate(3) == 0.5);
    const IntensityEnvironment us = u.scaled(2.0, 4.0);
    CHECK(us.bridge_rate(0) == 4.0);
    CHECK(us.cut_rate(0) == 2.0);

    const IntensityEnvironment q =
        IntensityEnvironment::quenched({1.0, 2.0, 3.0}, {0.5, 0.6});
    CHECK(!q.uniform_rates());
    CHECK(q.bridge_rate(2) == 3.0);
    CHECK(q.cut_rate(1) == 0.6);
    CHECK_THROWS_AS(q.bridge_rate(3), InvalidParameter);

    const Graph g = Graph::path(3);
    const RateLaw bridge_law = RateLaw::two_point(0.5, 2.0, 0.25);
    const RateLaw cut_law = RateLaw::log_normal(0.0, 0.3);
    const IntensityEnvironment e1 = sample_environment(g, bridge_law, cut_law, 4, 1);
    const IntensityEnvironment e2 = sample_environment(g, bridge_law, cut_law, 4, 1);
    for (uint64_t e = 0; e < g.edge_count(); ++e) {
        CHECK(e1.bridge_rate(e) == e2.bridge_rate(e));
        CHECK((e1.bridge_rate(e) == 0.5 || e1.bridge_rate(e) == 2.0));
    }
    for (uint32_t v = 0; v < 3; ++v) CHECK(e1.cut_rate(v) > 0.0);

    RngStream s(0, StreamPurpose::Environment);
    CHECK(RateLaw::point_mass(1.5).sample(s) == 1.5);
}

TEST_CASE("sha1 matches known digests") {
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
          "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}

TEST_CASE("double formatting round-trips exactly") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 2.2250738585072014e-308, 12345.6789,
                     9007199254740993.0, -0.0, 1.5e17}) {
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK_THROWS_AS(parse_double("1.5x"), IoError);
    CHECK_THROWS_AS(parse_double(""), IoError);
}

TEST_CASE("parallel_for covers every index once, any worker count") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](uint64_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    std::vector<int> seq(1000, 0);
    parallel_for(seq.size(), 1, [&](uint64_t i) { seq[i] += 1; });
    CHECK(seq == hits);
}

TEST_CASE("summary statistics and binomial errors") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const SummaryStats s = summarize(xs);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0));
    CHECK(s.stderr_mean == doctest::Approx(std::sqrt(5.0 / 12.0)));
    CHECK(binomial_stderr(25, 100) == doctest::Approx(std::sqrt(0.25 * 0.75 / 100.0)));
    CHECK(binomial_stderr(0, 50) == 0.0);
}

TEST_CASE("line fit recovers exact coefficients and noise errors") {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 - 2.0 * xi);
    const LineFit exact = fit_line(x, y);
    CHECK(exact.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(exact.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(exact.slope_stderr == doctest::Approx(0.0).epsilon(1e-9));

    // hand-computed OLS on a small non-degenerate sample
    const std::vector<double> x2 = {0, 1, 2, 3};
    const std::vector<double> y2 = {0.1, 0.9, 2.2, 2.8};
    const LineFit fit = fit_line(x2, y2);
    CHECK(fit.slope == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.09).epsilon(1e-10));
}

TEST_CASE("special functions match frozen references") {
    CHECK(regularized_gamma_p(3.0, 2.5) == doctest::Approx(0.45618688411667048).epsilon(1e-12));
    CHECK(regularized_gamma_p(0.5, 0.25) == doctest::Approx(0.52049987781304654).epsilon(1e-12));
    CHECK(regularized_gamma_p(10.0, 12.0) == doctest::Approx(0.75760783832948765).epsilon(1e-12));
    CHECK(regularized_gamma_q(3.0, 2.5) ==
          doctest::Approx(1.0 - 0.45618688411667048).epsilon(1e-12));

    CHECK(chi_square_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_sf(10.0, 4.0) == doctest::Approx(0.040427681994512803).epsilon(1e-12));
    CHECK(chi_square_sf(1.2, 2.5) == doctest::Approx(0.66140615620017149).epsilon(1e-12));
    CHECK(chi_square_sf(25.0, 10.0) == doctest::Approx(0.0053455054871340643).epsilon(1e-12));

    CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.96394524366487509).epsilon(1e-12));
    CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735452).epsilon(1e-12));
    CHECK(kolmogorov_sf(1.5) == doctest::Approx(0.022217962616525129).epsilon(1e-12));

    CHECK(t_quantile_975(1) == doctest::Approx(12.7062047362).epsilon(1e-6));
    CHECK(t_quantile_975(2) == doctest::Approx(4.30265272975).epsilon(1e-6));
    CHECK(t_quantile_975(5) == doctest::Approx(2.57058183564).epsilon(1e-6));
    CHECK(t_quantile_975(30) == doctest::Approx(2.0422724563).epsilon(1e-6));
    CHECK(t_quantile_975(100) == doctest::Approx(1.98397151852).epsilon(1e-6));
}

TEST_CASE("chi-square tests behave on matched and mismatched data") {
    RngStream s(21, StreamPurpose::Generic);
    std::vector<uint64_t> a(8, 0), b(8, 0), c(8, 0);
    for (int i = 0; i < 20000; ++i) {
        ++a[s.next_below(8)];
        ++b[s.next_below(8)];
        ++c[std::min<uint64_t>(7, s.next_below(10))];  // different law
    }
    CHECK(chi_square_homogeneity(a, b).p_value > 1e-3);
    CHECK(chi_square_homogeneity(a, c).p_value < 1e-6);

    const std::vector<double> uniform(8, 1.0 / 8.0);
    CHECK(chi_square_gof(a, uniform).p_value > 1e-3);
}

TEST_CASE("two-sample KS separates laws and accepts equal ones") {
    RngStream s(31, StreamPurpose::Generic);
    std::vector<double> a, b, c;
    for (int i = 0; i < 5000; ++i) {
        a.push_back(s.next_exp(1.0));
        b.push_back(s.next_exp(1.0));
        c.push_back(s.next_exp(1.3));
    }
    CHECK(ks_two_sample(a, b).p_value > 1e-3);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("batch ratio reduces to the exact ratio and flags empty denominators") {
    const std::vector<double> num = {1.0, 2.0, 3.0, 2.0};
    const std::vector<double> den = {2.0, 4.0, 6.0, 4.0};
    const RatioEstimate r = batch_ratio(num, den);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.stderr_value == doctest::Approx(0.0).epsilon(1e-12));
    const std::vector<double> zeros(4, 0.0);
    CHECK_THROWS_AS(batch_ratio(num, zeros), InsufficientData);
}
