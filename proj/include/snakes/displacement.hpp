#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "snakes/rng.hpp"

namespace snakes {

enum class DisplacementFamily {
    uniform3,          // uniform on {-1, 0, 1}
    uniform_interval,  // uniform on (a, b)
    symmetric_pareto,  // P(Y > y) = 1/2 (1+y)^-beta, symmetric
    shifted,           // base + m
    regime_pareto,     // calibrated so n P(+-Y >= (n/B_n)^{1/p}) = a_+-; needs materialize()
    two_sided_pareto   // concrete calibrated law produced by materialize()
};

/**
 * DisplacementLaw — the law of the i.i.d. edge displacements Y.
 *
 * Draws are quantized to the dyadic grid 2^-26, which makes path sums and
 * their small/large splits exact in double precision at desk scale (every
 * position is an integer multiple of 2^-26 while |S| < 2^27). Moments and
 * tail probabilities are reported for the continuous law; the grid error
 * (~1.5e-8 relative) is far below every statistical tolerance used here.
 *
 * The regime-pareto family is a recipe, not a sampler: it must be
 * materialized at a concrete (n, B_n, alpha), which solves the two-sided
 * Pareto scale from the finite-n equation n P(+-Y >= (n/B_n)^{1/p}) = a_+-
 * with tail exponent kappa = p alpha/(alpha-1).
 */
class DisplacementLaw {
public:
    static DisplacementLaw uniform3();
    static DisplacementLaw uniform_interval(double a, double b);
    static DisplacementLaw symmetric_pareto(double beta);
    static DisplacementLaw shifted(DisplacementLaw base, double m);
    static DisplacementLaw regime_pareto(double p, double a_plus, double a_minus);

    /// CLI syntax: uniform3 | uniform:a,b | pareto:beta=10 |
    /// shift:m=1,base=<spec> | regime:p=2,aplus=1,aminus=1
    static DisplacementLaw parse(const std::string& spec);

    bool needs_calibration() const { return family_ == DisplacementFamily::regime_pareto; }
    DisplacementLaw materialize(std::int64_t n, double b_n, double alpha) const;

    double sample(Rng& rng) const;

    double mean() const { return mean_; }
    /// Second moment E[Y^2] (the paper's Sigma^2); +inf when infinite.
    double second_moment() const { return m2_; }
    double variance() const { return m2_ - mean_ * mean_; }

    double survival_ge(double t) const;              // P(Y >= t)
    double survival_gt(double t) const;              // P(Y > t)
    double survival_abs_ge(double y) const;          // P(|Y| >= y)
    double survival_abs_gt(double y) const;          // P(|Y| > y)

    DisplacementFamily family() const { return family_; }
    const std::string& describe() const { return describe_; }
    /// p of the regime recipe this law realizes (2 when not applicable).
    double regime_p() const { return p_; }

    /// Round to the 2^-26 dyadic grid (identity above 2^26 where the grid
    /// would be finer than one ulp).
    static double quantize(double y);

private:
    DisplacementLaw() = default;

    DisplacementFamily family_ = DisplacementFamily::uniform3;
    std::string describe_;
    double mean_ = 0.0, m2_ = 0.0;
    double a_ = 0.0, b_ = 0.0;            // uniform interval
    double beta_ = 0.0;                   // symmetric pareto
    double shift_ = 0.0;                  // shifted
    std::shared_ptr<const DisplacementLaw> base_;   // shifted
    double p_ = 2.0, a_plus_ = 0.0, a_minus_ = 0.0; // regime recipe
    double kappa_ = 0.0;                            // two-sided pareto
    double rho_pos_ = 0.0, rho_neg_ = 0.0;
    double s_pos_ = 0.0, s_neg_ = 0.0;
};

} // namespace snakes
