#include "stperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stperc/errors.hpp"

namespace stperc {

SummaryStats summarize(std::span<const double> xs) {
    SummaryStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.variance = ss / static_cast<double>(s.n - 1);
        s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.n));
    }
    return s;
}

double binomial_stderr(uint64_t successes, uint64_t trials) {
    if (trials == 0) throw InvalidParameter("binomial_stderr: trials must be positive");
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidParameter("fit_line: size mismatch");
    const uint64_t n = x.size();
    if (n < 2) throw InsufficientData("fit_line: need at least two points");
    double mx = 0.0, my = 0.0;
    for (uint64_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (uint64_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("fit_line: x values are all equal");
    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n >= 3) {
        double rss = 0.0;
        for (uint64_t i = 0; i < n; ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            rss += r * r;
        }
        f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

double t_quantile_975(uint64_t dof) {
    static const double table[] = {
        12.706204736174705, 4.3026527297494637, 3.1824463052837095, 2.7764451051977943,
        2.5705818356363155, 2.4469118511449701, 2.3646242515927853, 2.3060041352041667,
        2.2621571627982053, 2.2281388519862748, 2.2009851600916397, 2.1788128296672289,
        2.1603686564627926, 2.1447866879178039, 2.1314495455597755, 2.1199052992212546,
        2.109815577833317,  2.1009220402410387, 2.0930240544083096, 2.0859634472658648,
        2.0796138447276804, 2.0738730679040263, 2.0686576104190486, 2.0638985616280259,
        2.0595385527532977, 2.0555294386428731, 2.0518305164802855, 2.048407141795245,
        2.0452296421327043, 2.0422724563012382};
    if (dof == 0) throw InvalidParameter("t_quantile_975: dof must be positive");
    if (dof <= 30) return table[dof - 1];
    // expansion around the normal quantile; relative error below 2e-8 for dof > 30
    const double z = 1.9599639845400543;
    const double z3 = z * z * z, z5 = z3 * z * z, z7 = z5 * z * z, z9 = z7 * z * z;
    const double nu = static_cast<double>(dof);
    return z + (z3 + z) / (4 * nu) + (5 * z5 + 16 * z3 + 3 * z) / (96 * nu * nu) +
           (3 * z7 + 19 * z5 + 17 * z3 - 15 * z) / (384 * nu * nu * nu) +
           (79 * z9 + 776 * z7 + 1482 * z5 - 1920 * z3 - 945 * z) /
               (92160 * nu * nu * nu * nu);
}

namespace {

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("regularized_gamma: series did not converge");
}

// Continued fraction for Q(a,x), valid for x >= a + 1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw NumericError("regularized_gamma: continued fraction did not converge");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw InvalidParameter("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw InvalidParameter("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double dof) {
    if (!(dof > 0.0)) throw InvalidParameter("chi_square_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

namespace {

// Pool trailing bins until each pooled expectation reaches min_expected.
// Returns pooled (observed, expected) pairs.
void pool_bins(std::span<const uint64_t> observed, std::span<const double> expected,
               double min_expected, std::vector<double>& obs_out, std::vector<double>& exp_out) {
    obs_out.clear();
    exp_out.clear();
    double o_acc = 0.0, e_acc = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        o_acc += static_cast<double>(observed[i]);
        e_acc += expected[i];
        if (e_acc >= min_expected) {
            obs_out.push_back(o_acc);
            exp_out.push_back(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (!exp_out.empty()) {
            obs_out.back() += o_acc;
            exp_out.back() += e_acc;
        } else {
            obs_out.push_back(o_acc);
            exp_out.push_back(e_acc);
        }
    }
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const uint64_t> observed,
                               std::span<const double> probabilities, double min_expected) {
    if (observed.size() != probabilities.size())
        throw InvalidParameter("chi_square_gof: size mismatch");
    uint64_t total = 0;
    for (uint64_t o : observed) total += o;
    if (total == 0) throw InsufficientData("chi_square_gof: no observations");
    std::vector<double> expected(probabilities.size());
    for (size_t i = 0; i < probabilities.size(); ++i)
        expected[i] = probabilities[i] * static_cast<double>(total);

    std::vector<double> obs, exp;
    pool_bins(observed, expected, min_expected, obs, exp);
    if (obs.size() < 2) throw InsufficientData("chi_square_gof: fewer than two usable bins");

    ChiSquareResult r;
    r.bins_used = obs.size();
    for (size_t i = 0; i < obs.size(); ++i) {
        if (exp[i] <= 0.0) throw InvalidParameter("chi_square_gof: zero expected mass in a bin");
        const double d = obs[i] - exp[i];
        r.statistic += d * d / exp[i];
    }
    r.dof = static_cast<double>(obs.size() - 1);
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

ChiSquareResult chi_square_homogeneity(std::span<const uint64_t> a, std::span<const uint64_t> b,
                                       double min_expected) {
    if (a.size() != b.size()) throw InvalidParameter("chi_square_homogeneity: size mismatch");
    double na = 0.0, nb = 0.0;
    for (uint64_t v : a) na += static_cast<double>(v);
    for (uint64_t v : b) nb += static_cast<double>(v);
    if (na == 0.0 || nb == 0.0) throw InsufficientData("chi_square_homogeneity: empty sample");

    // Pool jointly on the combined expectation so both groups share bins.
    std::vector<double> pooled(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        pooled[i] = static_cast<double>(a[i] + b[i]);

    std::vector<std::pair<double, double>> bins;  // (obs_a, obs_b) pooled
    double oa = 0.0, ob = 0.0, combined = 0.0;
    const double total = na + nb;
    const double frac_a = na / total;
    for (size_t i = 0; i < a.size(); ++i) {
        oa += static_cast<double>(a[i]);
        ob += static_cast<double>(b[i]);
        combined += pooled[i];
        // Require the smaller group's expectation to clear the threshold.
        const double min_group_exp = combined * std::min(frac_a, 1.0 - frac_a);
        if (min_group_exp >= min_expected) {
            bins.emplace_back(oa, ob);
            oa = ob = combined = 0.0;
        }
    }
    if (combined > 0.0 || oa > 0.0 || ob > 0.0) {
        if (!bins.empty()) {
            bins.back().first += oa;
            bins.back().second += ob;
        } else {
            bins.emplace_back(oa, ob);
        }
    }
    if (bins.size() < 2)
        throw InsufficientData("chi_square_homogeneity: fewer than two usable bins");

    ChiSquareResult r;
    r.bins_used = bins.size();
    for (const auto& [ca, cb] : bins) {
        const double col = ca + cb;
        const double ea = col * frac_a;
        const double eb = col * (1.0 - frac_a);
        r.statistic += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    r.dof = static_cast<double>(bins.size() - 1);
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InsufficientData("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    KsResult r;
    r.n1 = a.size();
    r.n2 = b.size();
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    r.statistic = d;
    const double ne = na * nb / (na + nb);
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    r.p_value = kolmogorov_sf(lam);
    return r;
}

RatioEstimate batch_ratio(std::span<const double> num_batches,
                          std::span<const double> den_batches) {
    if (num_batches.size() != den_batches.size() || num_batches.empty())
        throw InvalidParameter("batch_ratio: batch vectors must be equal-sized and non-empty");
    const uint64_t nb = num_batches.size();
    double num = 0.0, den = 0.0;
    for (uint64_t i = 0; i < nb; ++i) {
        num += num_batches[i];
        den += den_batches[i];
    }
    if (den == 0.0) throw InsufficientData("batch_ratio: denominator is zero");
    RatioEstimate r;
    r.value = num / den;
    if (nb >= 2) {
        const double dbar = den / static_cast<double>(nb);
        double ss = 0.0;
        for (uint64_t i = 0; i < nb; ++i) {
            const double score = (num_batches[i] - r.value * den_batches[i]) / dbar;
            ss += score * score;
        }
        r.stderr_value = std::sqrt(ss / (static_cast<double>(nb) * static_cast<double>(nb - 1)));
    }
    return r;
}

}  // namespace stperc
