#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stperc {

struct SummaryStats {
    uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1)
    double stderr_mean = 0.0;
};

SummaryStats summarize(std::span<const double> xs);

// Standard error of a binomial frequency estimate successes/trials.
double binomial_stderr(uint64_t successes, uint64_t trials);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    uint64_t n = 0;
};

// Ordinary least squares y ~ intercept + slope * x. Needs n >= 2 distinct x;
// slope_stderr needs n >= 3 (0 otherwise).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Two-sided 97.5% Student t quantile, for 95% confidence intervals.
double t_quantile_975(uint64_t dof);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution.
double chi_square_sf(double x, double dof);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    uint64_t bins_used = 0;
};

// Goodness of fit of observed counts against a discrete model distribution.
// Trailing bins are pooled until every expected count is at least min_expected.
ChiSquareResult chi_square_gof(std::span<const uint64_t> observed,
                               std::span<const double> probabilities,
                               double min_expected = 5.0);

// Homogeneity test between two vectors of counts over the same bins, with the
// same tail pooling rule applied to the pooled expectations.
ChiSquareResult chi_square_homogeneity(std::span<const uint64_t> a,
                                       std::span<const uint64_t> b,
                                       double min_expected = 5.0);

// Kolmogorov distribution survival function Q(lambda).
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    uint64_t n1 = 0;
    uint64_t n2 = 0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value. With atoms
// in the common law the p-value is conservative.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct RatioEstimate {
    double value = 0.0;
    double stderr_value = 0.0;
};

// Ratio sum(num)/sum(den) from per-batch totals, with a delta-method standard
// error over batches. Throws InsufficientData when sum(den) == 0.
RatioEstimate batch_ratio(std::span<const double> num_batches,
                          std::span<const double> den_batches);

}  // namespace stperc
