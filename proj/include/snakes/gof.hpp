#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace snakes {

/// Survival function of the Kolmogorov distribution, Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sided KS p-value of `samples` against a reference cdf, via the
/// asymptotic series with the finite-n correction factor
/// (sqrt(N) + 0.12 + 0.11/sqrt(N)); adequate for N >= 20.
double ks_test(std::vector<double> samples, const std::function<double(double)>& reference_cdf);

/// KS against the uniform law on [0,1].
double ks_test_uniform(std::vector<double> samples);

/// Regularized upper incomplete gamma Q(s, x) (series + continued fraction).
double gamma_q(double s, double x);

/// Chi-square p-value for equiprobable cells; requires expected count >= 5.
double chi_square_uniform(const std::vector<std::int64_t>& counts);

/// Chi-square homogeneity p-value for two independent count vectors over the
/// same cells (k-1 degrees of freedom).
double chi_square_two_sample(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    std::size_t points = 0;
};

/// Least-squares slope of log10(survival) against log10(x) over an explicit
/// survival table {x, P(X > x)}. Requires x to span >= `min_decades`.
SlopeFit tail_slope(const std::vector<double>& xs, const std::vector<double>& survival,
                    double min_decades = 2.0);

/// Builds the empirical survival table of `samples` on a log-spaced grid of
/// `grid_points` between lo and hi, then fits. Points with fewer than
/// `min_tail_count` exceedances are dropped.
SlopeFit tail_slope_from_samples(const std::vector<double>& samples, double lo, double hi,
                                 std::size_t grid_points, double min_decades = 2.0,
                                 std::size_t min_tail_count = 10);

} // namespace snakes
