#include <doctest.h>

#include <cmath>
#include <vector>

#include "stperc/errors.hpp"
#include "stperc/meanfield.hpp"
#include "stperc/rng.hpp"
#include "stperc/stats.hpp"

using namespace stperc;

TEST_CASE("family-size formulas match frozen values and limits") {
    CHECK(mean_family_size(1.0, 1.0) == doctest::Approx(0.89636167648567304).epsilon(1e-14));
    CHECK(mean_family_size(1.0, 2.0) ==
          doctest::Approx(2 * 0.89636167648567304).epsilon(1e-14));
    // long circles: F -> 2 lambda
    CHECK(mean_family_size(100.0, 1.5) == doctest::Approx(3.0).epsilon(1e-10));
    // weighted version coincides exactly at q = 1
    for (double beta : {0.3, 1.0, 2.7})
        for (double lambda : {0.1, 1.0, 4.0})
            CHECK(weighted_mean_family_size(beta, lambda, 1.0) ==
                  mean_family_size(beta, lambda));
    CHECK(weighted_mean_family_size(1.0, 1.0, 2.0) ==
          doctest::Approx(0.38079707797788244).epsilon(1e-14));
}

TEST_CASE("critical intensity inverts the family size") {
    for (double beta : {0.5, 1.0, 3.0})
        for (double q : {1.0, 1.5, 2.0}) {
            const double lc = critical_lambda(beta, q);
            CHECK(weighted_mean_family_size(beta, lc, q) == doctest::Approx(1.0).epsilon(1e-12));
        }
    CHECK(critical_lambda(1.0, 1.0) == doctest::Approx(1.1156211005368473).epsilon(1e-12));
    CHECK(critical_lambda(1.0, 2.0) == doctest::Approx(2.0 / std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("weighted cut-count law is a probability law with the right normalizer") {
    CHECK(cut_count_normalizer(2.0, 3.0) == doctest::Approx(54.868820599617464).epsilon(1e-14));
    for (double beta : {0.5, 2.0})
        for (double q : {1.0, 2.0, 3.5}) {
            double sum = 0.0;
            for (uint64_t k = 0; k < 300; ++k) sum += cut_count_pmf(k, beta, q);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
    // q = 1 reduces to plain Poisson
    for (uint64_t k : {uint64_t{0}, uint64_t{1}, uint64_t{4}}) {
        const double poisson =
            std::exp(-1.5) * std::pow(1.5, double(k)) / std::tgamma(double(k) + 1);
        CHECK(cut_count_pmf(k, 1.5, 1.0) == doctest::Approx(poisson).epsilon(1e-12));
    }
}

TEST_CASE("cut-count sampling follows the weighted law") {
    RngStream stream(7, StreamPurpose::Estimator);
    const double beta = 2.0, q = 3.0;
    std::vector<uint64_t> hist(24, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const uint64_t k = sample_cut_count(beta, q, stream);
        ++hist[std::min<uint64_t>(k, hist.size() - 1)];
    }
    std::vector<double> probs(hist.size(), 0.0);
    double head = 0.0;
    for (size_t k = 0; k + 1 < probs.size(); ++k) {
        probs[k] = cut_count_pmf(k, beta, q);
        head += probs[k];
    }
    probs.back() = 1.0 - head;
    CHECK(chi_square_gof(hist, probs).p_value > 1e-3);
}

TEST_CASE("interval sampling matches the mean identity across lambda") {
    // E|I| = q F_q / lambda is lambda-free
    for (double beta : {1.0, 2.0})
        for (double q : {1.0, 2.0}) {
            const double a = q * weighted_mean_family_size(beta, 0.5, q) / 0.5;
            const double b = q * weighted_mean_family_size(beta, 4.0, q) / 4.0;
            CHECK(a == doctest::Approx(b).epsilon(1e-13));
            CHECK(mean_weighted_interval(beta, q) == doctest::Approx(a).epsilon(1e-12));

            RngStream stream(8, StreamPurpose::Estimator, uint64_t(beta * 10 + q));
            double sum = 0.0;
            const int draws = 200000;
            for (int i = 0; i < draws; ++i) sum += sample_weighted_interval(beta, q, stream);
            const double mean = sum / draws;
            CHECK(std::fabs(mean - a) < 4.5 * beta / std::sqrt(double(draws)));
        }
}

TEST_CASE("offspring rates and the two criticality regimes") {
    CHECK(offspring_rate_value(3.0, 2.0, OffspringRate::Full) == 3.0);
    CHECK(offspring_rate_value(3.0, 2.0, OffspringRate::PerColor) == 1.5);

    const double beta = 1.0, q = 2.0;
    const double crit = critical_lambda(beta, q);
    // between crit/q and crit the full rate survives, the per-color rate dies
    const double lambda = 0.7 * crit;
    CHECK(survival_probability(beta, lambda, q, OffspringRate::Full) > 0.0);
    CHECK(survival_probability(beta, lambda, q, OffspringRate::PerColor) == 0.0);
    CHECK(survival_probability(beta, 1.05 * crit, q, OffspringRate::PerColor) > 0.0);
    CHECK(survival_probability(beta, 0.95 * crit, q, OffspringRate::PerColor) == 0.0);
}

TEST_CASE("fixed point satisfies its own equation under direct sampling") {
    const double beta = 1.0, lambda = 2.0;
    const double pi = survival_probability(beta, lambda, 1.0, OffspringRate::Full);
    CHECK(pi > 0.0);
    CHECK(pi < 1.0);
    RngStream stream(9, StreamPurpose::Estimator);
    double sum = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i)
        sum += std::exp(-lambda * pi * sample_weighted_interval(beta, 1.0, stream));
    const double rhs = 1.0 - sum / draws;
    CHECK(std::fabs(rhs - pi) < 4.5 / std::sqrt(double(draws)));
}

TEST_CASE("tree simulation brackets the fixed point") {
    const double pi = survival_probability(1.0, 2.0, 1.0, OffspringRate::Full);
    const BranchingEstimate est =
        simulate_branching_survival(1.0, 2.0, 1.0, OffspringRate::Full, 20000, 10);
    CHECK(std::fabs(est.probability - pi) < 4.0 * est.stderr_value);

    const BranchingEstimate dead =
        simulate_branching_survival(1.0, 0.5, 1.0, OffspringRate::Full, 2000, 10);
    CHECK(dead.probability == 0.0);

    const BranchingEstimate none =
        simulate_branching_survival(1.0, 0.0, 1.0, OffspringRate::Full, 100, 10);
    CHECK(none.probability == 0.0);
    CHECK(survival_probability(1.0, 0.0, 1.0, OffspringRate::Full) == 0.0);
}

TEST_CASE("complete-graph samples are valid, deterministic and capacity-guarded") {
    const MeanFieldSample a = simulate_complete_graph(60, 1.0, 1.5, 1, 0, 0, 11, 3);
    const MeanFieldSample b = simulate_complete_graph(60, 1.0, 1.5, 1, 0, 0, 11, 3);
    CHECK(a.largest_measure == b.largest_measure);
    CHECK(a.fraction == doctest::Approx(a.largest_measure / 60.0));
    CHECK(a.fraction >= 0.0);
    CHECK(a.fraction <= 1.0);

    const MeanFieldSample w = simulate_complete_graph(30, 1.0, 3.0, 2, 60, 10, 11, 0);
    CHECK(w.fraction >= 0.0);
    CHECK(w.fraction <= 1.0);

    CHECK_THROWS_AS(simulate_complete_graph(5001, 1.0, 1.0, 1, 0, 0, 0), CapacityError);
    CHECK_THROWS_AS(simulate_complete_graph(501, 1.0, 1.0, 2, 10, 1, 0), CapacityError);
    CHECK_THROWS_AS(simulate_complete_graph(100, 1.0, -1.0, 1, 0, 0, 0), InvalidParameter);
}

TEST_CASE("coupled intensities give monotone largest clusters") {
    const std::vector<double> lambdas = {0.4, 1.0, 2.5};
    for (uint64_t r = 0; r < 40; ++r) {
        const std::vector<MeanFieldSample> family =
            simulate_complete_graph_coupled(120, 1.0, lambdas, 12, r);
        REQUIRE(family.size() == 3);
        CHECK(family[0].largest_measure <= family[1].largest_measure + 1e-12);
        CHECK(family[1].largest_measure <= family[2].largest_measure + 1e-12);
    }
    CHECK_THROWS_AS(simulate_complete_graph_coupled(50, 1.0, {2.0, 1.0}, 0, 0),
                    InvalidParameter);
}

TEST_CASE("independent-line model coincides with the plain model at q = 1") {
    const uint32_t n = 250;
    const double beta = 1.0, lambda = 1.4;
    std::vector<double> plain, product;
    for (uint64_t r = 0; r < 80; ++r) {
        plain.push_back(simulate_complete_graph(n, beta, lambda, 1, 0, 0, 13, r).fraction);
        product.push_back(sample_product_rc_model(n, beta, lambda, 1.0, 14, r).fraction);
    }
    CHECK(ks_two_sample(plain, product).p_value > 1e-3);
}

TEST_CASE("supercritical product model grows with q kept fixed") {
    // per-edge rate lambda/(q n): raising q weakens connectivity
    const MeanFieldSample strong = sample_product_rc_model(400, 1.0, 4.0, 1.0, 15, 0);
    double weak_mean = 0.0, strong_mean = 0.0;
    for (uint64_t r = 0; r < 20; ++r) {
        strong_mean += sample_product_rc_model(400, 1.0, 4.0, 1.0, 15, r).fraction;
        weak_mean += sample_product_rc_model(400, 1.0, 4.0, 4.0, 15, r).fraction;
    }
    CHECK(strong.fraction <= 1.0);
    CHECK(weak_mean < strong_mean);
}
