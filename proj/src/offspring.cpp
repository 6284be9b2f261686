#include "snakes/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace snakes {

namespace {

constexpr double kCritTol = 1e-12;

/// Tail sum T_b(k) = sum_{j>=k} j^{-b} by Euler-Maclaurin; needs k >= ~32.
double power_tail_sum(double b, double k) {
    const double kb = std::pow(k, -b);
    return k * kb / (b - 1.0) + kb / 2.0 + b * kb / (12.0 * k)
         - b * (b + 1.0) * (b + 2.0) * kb / (720.0 * k * k * k);
}

/// sum_{j>=2} j^{-b} (that is zeta(b) - 1), b > 1.
double zeta_minus_one(double b) {
    double s = 0.0;
    for (int j = 2; j < 4096; ++j) s += std::pow(static_cast<double>(j), -b);
    return s + power_tail_sum(b, 4096.0);
}

} // namespace

void AliasTable::build(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("alias table: empty weights");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("alias table: weights must sum to > 0");

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back(); small.pop_back();
        const std::uint32_t l = large.back(); large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;   // round-off leftovers
}

void OffspringLaw::finalize() {
    // Closure: table_[2..] and the analytic tail are given; solve mu(1), mu(0)
    // so that total mass is 1 and the mean is 1.
    double s = tail_mass_, m = 0.0;
    if (tail_c_ > 0.0) {
        // mean contribution of the tail: c * sum_{j>kmax} j^{-alpha}
        m = tail_c_ * power_tail_sum(alpha_, static_cast<double>(table_.size()));
    }
    for (std::size_t k = 2; k < table_.size(); ++k) {
        s += table_[k];
        m += static_cast<double>(k) * table_[k];
    }
    if (m > 1.0 + kCritTol)
        throw std::invalid_argument("offspring law: mass beyond k=1 already exceeds mean 1");
    if (!(m > s))
        throw std::invalid_argument("offspring law: cannot satisfy mu(0) > 0");
    table_[1] = std::max(0.0, 1.0 - m);
    table_[0] = m - s;

    // Moments from the finished table.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < table_.size(); ++k) {
        mean += static_cast<double>(k) * table_[k];
        m2 += static_cast<double>(k) * static_cast<double>(k) * table_[k];
    }
    if (tail_c_ > 0.0) {
        mean += tail_c_ * power_tail_sum(alpha_, static_cast<double>(table_.size()));
        m2 = std::numeric_limits<double>::infinity();   // sum k^{1-alpha} diverges, alpha <= 2
    }
    mean_ = mean;
    sigma2_ = std::isinf(m2) ? m2 : m2 - mean * mean;
    if (std::abs(mean_ - 1.0) > kCritTol)
        throw std::invalid_argument("offspring law: mean != 1 (got " + std::to_string(mean_) + ")");
    if (!(table_[0] > 0.0))
        throw std::invalid_argument("offspring law: mu(0) must be > 0");

    period_ = 0;
    for (std::size_t k = 1; k < table_.size(); ++k)
        if (table_[k] > 0.0) period_ = std::gcd(period_, static_cast<int>(k));
    if (tail_c_ > 0.0) period_ = 1;
    if (period_ == 0)
        throw std::invalid_argument("offspring law: no positive support beyond 0");

    suffix_.assign(table_.size() + 1, 0.0);
    suffix_[table_.size()] = tail_mass_;
    for (std::size_t k = table_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + table_[k];

    std::vector<double> w = table_;
    if (tail_c_ > 0.0) w.push_back(tail_mass_);
    alias_.build(w);
}

OffspringLaw OffspringLaw::geometric(double p) {
    if (std::abs(p - 0.5) > kCritTol)
        throw std::invalid_argument("geometric offspring law is critical only at p = 1/2");
    OffspringLaw law;
    law.family_ = OffspringFamily::geometric;
    law.describe_ = "geometric:0.5";
    law.table_.assign(64, 0.0);
    for (std::size_t k = 2; k < 64; ++k) law.table_[k] = std::ldexp(1.0, -static_cast<int>(k) - 1);
    law.alpha_ = 2.0;
    law.finalize();
    return law;
}

OffspringLaw OffspringLaw::poisson1() {
    OffspringLaw law;
    law.family_ = OffspringFamily::poisson;
    law.describe_ = "poisson:1";
    law.table_.assign(36, 0.0);
    double fact = 2.0;
    for (std::size_t k = 2; k < 36; ++k) {
        law.table_[k] = std::exp(-1.0) / fact;
        fact *= static_cast<double>(k + 1);
    }
    law.alpha_ = 2.0;
    law.finalize();
    return law;
}

OffspringLaw OffspringLaw::binary() {
    OffspringLaw law;
    law.family_ = OffspringFamily::binary;
    law.describe_ = "binary";
    law.table_ = {0.0, 0.0, 0.5};
    law.alpha_ = 2.0;
    law.finalize();
    return law;
}

OffspringLaw OffspringLaw::stable_tail(double alpha, double c) {
    if (!(alpha > 1.0) || !(alpha <= 2.0))
        throw std::invalid_argument("stable-tail: alpha must lie in (1,2]");
    const double zm1 = zeta_minus_one(alpha);
    if (c == 0.0) c = 0.5 / zm1;
    if (!(c > 0.0) || c * zm1 > 1.0 + kCritTol)
        throw std::invalid_argument("stable-tail: c out of range (needs 0 < c <= 1/(zeta(alpha)-1))");

    OffspringLaw law;
    law.family_ = OffspringFamily::stable_tail;
    law.alpha_ = alpha;
    law.tail_c_ = c;
    {
        std::ostringstream os;
        os << "stable:alpha=" << alpha << ",c=" << c;
        law.describe_ = os.str();
    }
    // Table covers k <= kmax with kmax chosen so the analytic branch is rare
    // (mass < 1e-7 when it fits in 2^20 entries); beyond that, inversion on
    // the exact discrete power tail.
    std::size_t kmax = 1u << 12;
    while (kmax < (1u << 20) && c * power_tail_sum(1.0 + alpha, static_cast<double>(kmax + 1)) > 1e-7)
        kmax <<= 1;
    law.table_.assign(kmax + 1, 0.0);
    for (std::size_t k = 2; k <= kmax; ++k)
        law.table_[k] = c * std::pow(static_cast<double>(k), -1.0 - alpha);
    law.tail_mass_ = c * power_tail_sum(1.0 + alpha, static_cast<double>(kmax + 1));
    law.sigma2_ = std::numeric_limits<double>::infinity();
    law.finalize();
    return law;
}

OffspringLaw OffspringLaw::custom(std::vector<double> pmf) {
    if (pmf.size() < 2) throw std::invalid_argument("custom law: need support beyond {0}");
    double total = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (pmf[k] < 0.0) throw std::invalid_argument("custom law: negative mass");
        total += pmf[k];
        mean += static_cast<double>(k) * pmf[k];
    }
    if (std::abs(total - 1.0) > kCritTol || std::abs(mean - 1.0) > kCritTol)
        throw std::invalid_argument("custom law: must have total mass 1 and mean 1 within 1e-12");
    if (!(pmf[0] > 0.0)) throw std::invalid_argument("custom law: mu(0) must be > 0");

    OffspringLaw law;
    law.family_ = OffspringFamily::custom;
    law.describe_ = "custom";
    law.table_ = std::move(pmf);
    law.alpha_ = 2.0;
    // Keep the user's mu(0), mu(1): rebuild them through the closure by
    // feeding k>=2 masses only; the closure reproduces them exactly since
    // the law is already critical.
    law.finalize();
    return law;
}

int OffspringLaw::sample(Rng& rng) const {
    const std::uint32_t k = alias_.sample(rng);
    if (tail_c_ > 0.0 && k == table_.size())
        return static_cast<int>(sample_tail(rng));
    return static_cast<int>(k);
}

double OffspringLaw::pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    if (k < static_cast<std::int64_t>(table_.size())) return table_[static_cast<std::size_t>(k)];
    if (tail_c_ > 0.0) return tail_c_ * std::pow(static_cast<double>(k), -1.0 - alpha_);
    return 0.0;
}

double OffspringLaw::survival(std::int64_t k) const {
    if (k <= 0) return 1.0;
    if (k <= static_cast<std::int64_t>(table_.size())) return suffix_[static_cast<std::size_t>(k)];
    return tail_survival(k);
}

double OffspringLaw::tail_survival(std::int64_t k) const {
    if (tail_c_ <= 0.0) return 0.0;
    return tail_c_ * power_tail_sum(1.0 + alpha_, static_cast<double>(k));
}

std::int64_t OffspringLaw::sample_tail(Rng& rng) const {
    // Inverse transform on P(xi >= k) = tail_survival(k), k > kmax.
    const double u = rng.next_double_pos() * tail_mass_;
    std::int64_t lo = static_cast<std::int64_t>(table_.size());   // survival(lo) >= u
    std::int64_t hi = lo + 1;
    while (tail_survival(hi) >= u) {
        lo = hi;
        hi *= 2;
        if (hi > (std::int64_t{1} << 60)) break;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (tail_survival(mid) >= u ? lo : hi) = mid;
    }
    return lo;
}

OffspringLaw OffspringLaw::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (name == "binary") return binary();
    if (name == "geometric") return geometric(args.empty() ? 0.5 : std::stod(args));
    if (name == "poisson") {
        if (!args.empty() && std::abs(std::stod(args) - 1.0) > kCritTol)
            throw std::invalid_argument("poisson offspring law is critical only at rate 1");
        return poisson1();
    }
    if (name == "stable") {
        double alpha = 0.0, c = 0.0;
        std::stringstream ss(args);
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("stable: expected alpha=<v>[,c=<v>]");
            const std::string key = kv.substr(0, eq);
            const double val = std::stod(kv.substr(eq + 1));
            if (key == "alpha") alpha = val;
            else if (key == "c") c = val;
            else throw std::invalid_argument("stable: unknown key '" + key + "'");
        }
        if (alpha == 0.0) throw std::invalid_argument("stable: alpha is required");
        return stable_tail(alpha, c);
    }
    if (name == "custom") {
        if (args.empty() || args[0] != '@')
            throw std::invalid_argument("custom law: expected custom:@file");
        std::ifstream in(args.substr(1));
        if (!in) throw std::invalid_argument("custom law: cannot open " + args.substr(1));
        std::vector<double> pmf;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == 'k') continue;   // header `k,prob`
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            const auto k = static_cast<std::size_t>(std::stoll(line.substr(0, comma)));
            const double p = std::stod(line.substr(comma + 1));
            if (k >= pmf.size()) pmf.resize(k + 1, 0.0);
            pmf[k] = p;
        }
        return custom(std::move(pmf));
    }
    throw std::invalid_argument("unknown offspring law '" + spec + "'");
}

Normalization Normalization::finite_variance(const OffspringLaw& law) {
    const double s2 = law.sigma2();
    Normalization nn;
    nn.mode_ = NormalizationMode::finite_variance_exact;
    nn.fn_ = [s2](std::int64_t n) { return std::sqrt(static_cast<double>(n) * s2 / 2.0); };
    return nn;
}

Normalization Normalization::quantile(const OffspringLaw& law) {
    Normalization nn;
    nn.mode_ = NormalizationMode::quantile_calibrated;
    nn.fn_ = [law](std::int64_t n) {
        // least integer b with P(X > b) <= 1/n, X = xi - 1, so P(X > b) = P(xi >= b+2)
        const double target = 1.0 / static_cast<double>(n);
        std::int64_t lo = 0, hi = 1;
        while (law.survival(hi + 2) > target) { lo = hi; hi *= 2; }
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (law.survival(mid + 2) > target ? lo : hi) = mid;
        }
        const std::int64_t b = law.survival(lo + 2) <= target ? lo : hi;
        return std::max(1.0, static_cast<double>(b));
    };
    return nn;
}

Normalization Normalization::user(std::function<double(std::int64_t)> fn) {
    Normalization nn;
    nn.mode_ = NormalizationMode::user_supplied;
    nn.fn_ = std::move(fn);
    return nn;
}

const char* Normalization::mode_name() const {
    switch (mode_) {
        case NormalizationMode::finite_variance_exact: return "finite-variance-exact";
        case NormalizationMode::quantile_calibrated: return "quantile-calibrated";
        default: return "user-supplied";
    }
}

Normalization normalization_for(const OffspringLaw& law, NormalizationMode mode) {
    switch (mode) {
        case NormalizationMode::finite_variance_exact:
            if (!law.finite_variance())
                throw std::invalid_argument("finite-variance-exact normalization needs sigma^2 < inf");
            return Normalization::finite_variance(law);
        case NormalizationMode::quantile_calibrated:
            return Normalization::quantile(law);
        default:
            throw std::invalid_argument("user-supplied normalization needs an explicit function");
    }
}

Normalization default_normalization(const OffspringLaw& law) {
    return law.finite_variance() ? Normalization::finite_variance(law)
                                 : Normalization::quantile(law);
}

} // namespace snakes
