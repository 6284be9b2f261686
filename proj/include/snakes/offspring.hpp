#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "snakes/rng.hpp"

namespace snakes {

enum class OffspringFamily { geometric, poisson, binary, stable_tail, custom };

/// Walker/Vose alias table over {0..K-1}; O(1) per draw.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& weights) { build(weights); }
    void build(const std::vector<double>& weights);

    std::uint32_t sample(Rng& rng) const {
        const std::uint32_t i = static_cast<std::uint32_t>(rng.next_below(prob_.size()));
        return rng.next_double() < prob_[i] ? i : alias_[i];
    }
    bool empty() const { return prob_.empty(); }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

/**
 * OffspringLaw — a critical offspring distribution: mean exactly 1, mu(0) > 0.
 *
 * All families are stored as an explicit probability table; the stable-tail
 * family additionally carries an analytic power tail mu(k) = c k^{-1-alpha}
 * beyond the table, sampled by inversion. Criticality is enforced by
 * construction: masses at 0 and 1 are solved from the rest of the law so
 * that the total mass and the mean are exact.
 *
 * Immutable after construction; safe to share across threads. Each worker
 * draws from its own Rng stream.
 */
class OffspringLaw {
public:
    static OffspringLaw geometric(double p = 0.5);
    static OffspringLaw poisson1();
    static OffspringLaw binary();
    /// mu(k) = c k^{-1-alpha} for k >= 2; c = 0 picks a default with mean
    /// contribution 1/2 from the tail part.
    static OffspringLaw stable_tail(double alpha, double c = 0.0);
    /// Full pmf over {0..K}; validated for criticality within 1e-12.
    static OffspringLaw custom(std::vector<double> pmf);

    /// CLI syntax: geometric:0.5 | poisson:1 | binary | stable:alpha=1.3[,c=0.2] | custom:@file
    static OffspringLaw parse(const std::string& spec);

    /// One offspring count xi with P(xi = k) = mu(k).
    int sample(Rng& rng) const;

    double pmf(std::int64_t k) const;
    /// P(xi >= k), exact over table + analytic tail.
    double survival(std::int64_t k) const;

    double mean() const { return mean_; }
    /// Variance; +inf when the law has infinite variance.
    double sigma2() const { return sigma2_; }
    bool finite_variance() const { return sigma2_ != std::numeric_limits<double>::infinity(); }
    double alpha() const { return alpha_; }
    double mu0() const { return table_[0]; }
    /// gcd of the positive support; 1 means aperiodic. Trees of n+1 vertices
    /// exist only when n is a multiple of the period.
    int period() const { return period_; }
    OffspringFamily family() const { return family_; }
    const std::string& describe() const { return describe_; }

private:
    OffspringLaw() = default;
    void finalize();            // closure on mu0/mu1, moments, alias, suffix sums
    double tail_survival(std::int64_t k) const;   // analytic part, k > kmax
    std::int64_t sample_tail(Rng& rng) const;     // inversion on the analytic tail

    OffspringFamily family_ = OffspringFamily::custom;
    std::string describe_;
    std::vector<double> table_;      // mu(0..kmax)
    std::vector<double> suffix_;     // suffix_[k] = sum_{j>=k} table_[j] + tail mass
    AliasTable alias_;               // over table entries (+1 tail slot if tail_c_>0)
    double tail_c_ = 0.0;            // analytic tail coefficient; 0 = no tail
    double tail_mass_ = 0.0;         // P(xi > kmax)
    double alpha_ = 2.0;             // stability index in (1,2]
    double mean_ = 1.0;
    double sigma2_ = 0.0;
    int period_ = 1;
};

enum class NormalizationMode { finite_variance_exact, quantile_calibrated, user_supplied };

/**
 * Normalization — the sequence B_n scaling the tree encodings.
 *
 * finite-variance-exact: B(n) = sqrt(n sigma^2 / 2).
 * quantile-calibrated:   B(n) = inf{ b : P(X > b) <= 1/n } with X = xi - 1;
 *                        correct up to a slowly varying constant only, and
 *                        flagged as such in reports.
 */
class Normalization {
public:
    static Normalization finite_variance(const OffspringLaw& law);
    static Normalization quantile(const OffspringLaw& law);
    static Normalization user(std::function<double(std::int64_t)> fn);

    double operator()(std::int64_t n) const { return fn_(n); }
    NormalizationMode mode() const { return mode_; }
    const char* mode_name() const;

private:
    std::function<double(std::int64_t)> fn_;
    NormalizationMode mode_ = NormalizationMode::user_supplied;
};

/// Picks the normalization for a law; throws std::invalid_argument when the
/// mode is incompatible (finite-variance-exact with sigma^2 = inf).
Normalization normalization_for(const OffspringLaw& law, NormalizationMode mode);

/// Default normalization: exact when the variance is finite, quantile otherwise.
Normalization default_normalization(const OffspringLaw& law);

} // namespace snakes
