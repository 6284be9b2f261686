#include "snakes/displacement.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace snakes {

namespace {
constexpr double kGrid = 67108864.0;   // 2^26
}

double DisplacementLaw::quantize(double y) {
    if (std::abs(y) >= kGrid) return y;
    return std::nearbyint(y * kGrid) / kGrid;
}

DisplacementLaw DisplacementLaw::uniform3() {
    DisplacementLaw law;
    law.family_ = DisplacementFamily::uniform3;
    law.describe_ = "uniform3";
    law.mean_ = 0.0;
    law.m2_ = 2.0 / 3.0;
    return law;
}

DisplacementLaw DisplacementLaw::uniform_interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform interval: need a < b");
    DisplacementLaw law;
    law.family_ = DisplacementFamily::uniform_interval;
    law.a_ = a;
    law.b_ = b;
    law.mean_ = (a + b) / 2.0;
    law.m2_ = (b - a) * (b - a) / 12.0 + law.mean_ * law.mean_;
    std::ostringstream os;
    os << "uniform:" << a << "," << b;
    law.describe_ = os.str();
    return law;
}

DisplacementLaw DisplacementLaw::symmetric_pareto(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("symmetric pareto: beta > 0 required");
    DisplacementLaw law;
    law.family_ = DisplacementFamily::symmetric_pareto;
    law.beta_ = beta;
    law.mean_ = 0.0;
    // E[Y^2] = int_0^inf 2y (1+y)^-beta dy = 2/((beta-1)(beta-2))
    law.m2_ = beta > 2.0 ? 2.0 / ((beta - 1.0) * (beta - 2.0))
                         : std::numeric_limits<double>::infinity();
    std::ostringstream os;
    os << "pareto:beta=" << beta;
    law.describe_ = os.str();
    return law;
}

DisplacementLaw DisplacementLaw::shifted(DisplacementLaw base, double m) {
    if (base.family_ == DisplacementFamily::shifted || base.needs_calibration())
        throw std::invalid_argument("shifted: base must be a plain displacement law");
    DisplacementLaw law;
    law.family_ = DisplacementFamily::shifted;
    law.shift_ = quantize(m);
    law.mean_ = base.mean_ + law.shift_;
    law.m2_ = base.m2_ + 2.0 * law.shift_ * base.mean_ + law.shift_ * law.shift_;
    law.describe_ = "shift:m=" + std::to_string(m) + ",base=" + base.describe_;
    law.base_ = std::make_shared<DisplacementLaw>(std::move(base));
    return law;
}

DisplacementLaw DisplacementLaw::regime_pareto(double p, double a_plus, double a_minus) {
    if (!(p > 0.0) || p > 2.0) throw std::invalid_argument("regime pareto: p in (0,2] required");
    if (a_plus < 0.0 || a_minus < 0.0 || a_plus + a_minus <= 0.0)
        throw std::invalid_argument("regime pareto: a_+ + a_- must be > 0, both nonnegative");
    DisplacementLaw law;
    law.family_ = DisplacementFamily::regime_pareto;
    law.p_ = p;
    law.a_plus_ = a_plus;
    law.a_minus_ = a_minus;
    law.mean_ = 0.0;
    law.m2_ = std::numeric_limits<double>::quiet_NaN();   // defined after materialize
    std::ostringstream os;
    os << "regime:p=" << p << ",aplus=" << a_plus << ",aminus=" << a_minus;
    law.describe_ = os.str();
    return law;
}

DisplacementLaw DisplacementLaw::materialize(std::int64_t n, double b_n, double alpha) const {
    if (!needs_calibration()) return *this;
    const double kappa = p_ * alpha / (alpha - 1.0);
    const double threshold = std::pow(static_cast<double>(n) / b_n, 1.0 / p_);

    DisplacementLaw law;
    law.family_ = DisplacementFamily::two_sided_pareto;
    law.p_ = p_;
    law.kappa_ = kappa;
    const double big_a_pos = a_plus_ / static_cast<double>(n) * std::pow(threshold, kappa);
    const double big_a_neg = a_minus_ / static_cast<double>(n) * std::pow(threshold, kappa);
    if (a_plus_ == a_minus_) {
        law.rho_pos_ = law.rho_neg_ = 0.5;
        law.s_pos_ = law.s_neg_ = std::pow(2.0 * big_a_pos, 1.0 / kappa);
    } else {
        // Mean zero needs rho+ s+ = rho- s-; with kappa > 1 solve theta in
        // closed form so the side masses fill the law (rho+ + rho- = 1).
        if (kappa <= 1.0)
            throw std::invalid_argument(
                "regime pareto: asymmetric tails need kappa = p*alpha/(alpha-1) > 1 for a mean");
        auto inv = [&](double big_a) { return std::pow(big_a, -1.0 / (kappa - 1.0)); };
        const double theta_pow = 1.0 / (inv(big_a_pos) + inv(big_a_neg));
        const double theta = std::pow(theta_pow, (kappa - 1.0) / kappa);
        law.rho_pos_ = std::pow(theta, kappa / (kappa - 1.0)) * inv(big_a_pos);
        law.rho_neg_ = std::pow(theta, kappa / (kappa - 1.0)) * inv(big_a_neg);
        law.s_pos_ = theta / law.rho_pos_;
        law.s_neg_ = theta / law.rho_neg_;
    }
    law.mean_ = 0.0;
    law.m2_ = kappa > 2.0 ? (law.rho_pos_ * law.s_pos_ * law.s_pos_ +
                             law.rho_neg_ * law.s_neg_ * law.s_neg_) * kappa / (kappa - 2.0)
                          : std::numeric_limits<double>::infinity();
    std::ostringstream os;
    os << describe_ << "@n=" << n << " (kappa=" << kappa << ",s+=" << law.s_pos_
       << ",s-=" << law.s_neg_ << ")";
    law.describe_ = os.str();
    return law;
}

double DisplacementLaw::sample(Rng& rng) const {
    switch (family_) {
        case DisplacementFamily::uniform3:
            return static_cast<double>(static_cast<int>(rng.next_below(3)) - 1);
        case DisplacementFamily::uniform_interval:
            return quantize(a_ + (b_ - a_) * rng.next_double());
        case DisplacementFamily::symmetric_pareto: {
            const double mag = std::pow(rng.next_double_pos(), -1.0 / beta_) - 1.0;
            return quantize(rng.next_u64() & 1 ? mag : -mag);
        }
        case DisplacementFamily::shifted:
            return quantize(base_->sample(rng) + shift_);
        case DisplacementFamily::two_sided_pareto: {
            const double u = rng.next_double();
            if (u < rho_pos_)
                return quantize(s_pos_ * std::pow(rng.next_double_pos(), -1.0 / kappa_));
            if (u < rho_pos_ + rho_neg_)
                return quantize(-s_neg_ * std::pow(rng.next_double_pos(), -1.0 / kappa_));
            return 0.0;
        }
        case DisplacementFamily::regime_pareto:
            throw std::logic_error("regime pareto law must be materialized before sampling");
    }
    return 0.0;
}

double DisplacementLaw::survival_ge(double t) const {
    switch (family_) {
        case DisplacementFamily::uniform3:
            if (t <= -1.0) return 1.0;
            if (t <= 0.0) return 2.0 / 3.0;
            if (t <= 1.0) return 1.0 / 3.0;
            return 0.0;
        case DisplacementFamily::uniform_interval:
            if (t <= a_) return 1.0;
            if (t >= b_) return 0.0;
            return (b_ - t) / (b_ - a_);
        case DisplacementFamily::symmetric_pareto:
            if (t > 0.0) return 0.5 * std::pow(1.0 + t, -beta_);
            return 1.0 - 0.5 * std::pow(1.0 - t, -beta_);
        case DisplacementFamily::shifted:
            return base_->survival_ge(t - shift_);
        case DisplacementFamily::two_sided_pareto:
            // positive mass rho+ on [s+, inf), negative mass rho- on (-inf, -s-],
            // remaining mass (if any) is an atom at 0
            if (t > 0.0)
                return t <= s_pos_ ? rho_pos_ : rho_pos_ * std::pow(t / s_pos_, -kappa_);
            if (t > -s_neg_) return 1.0 - rho_neg_;
            return 1.0 - rho_neg_ * std::pow(-t / s_neg_, -kappa_);
        case DisplacementFamily::regime_pareto:
            throw std::logic_error("regime pareto law must be materialized first");
    }
    return 0.0;
}

double DisplacementLaw::survival_gt(double t) const {
    switch (family_) {
        case DisplacementFamily::uniform3:
            if (t < -1.0) return 1.0;
            if (t < 0.0) return 2.0 / 3.0;
            if (t < 1.0) return 1.0 / 3.0;
            return 0.0;
        case DisplacementFamily::uniform_interval:
        case DisplacementFamily::symmetric_pareto:
            return survival_ge(t);   // continuous laws
        case DisplacementFamily::two_sided_pareto:
            if (t >= s_pos_) return rho_pos_ * std::pow(t / s_pos_, -kappa_);
            if (t >= 0.0) return rho_pos_;
            if (t > -s_neg_) return 1.0 - rho_neg_;
            return 1.0 - rho_neg_ * std::pow(-t / s_neg_, -kappa_);
        case DisplacementFamily::shifted:
            return base_->survival_gt(t - shift_);
        case DisplacementFamily::regime_pareto:
            throw std::logic_error("regime pareto law must be materialized first");
    }
    return 0.0;
}

double DisplacementLaw::survival_abs_ge(double y) const {
    if (y <= 0.0) return 1.0;
    return survival_ge(y) + (1.0 - survival_gt(-y));
}

double DisplacementLaw::survival_abs_gt(double y) const {
    if (y < 0.0) return 1.0;
    return survival_gt(y) + (1.0 - survival_ge(-y));
}

DisplacementLaw DisplacementLaw::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (name == "uniform3") return uniform3();
    if (name == "uniform") {
        const auto comma = args.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("uniform: expected uniform:a,b");
        return uniform_interval(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
    }
    if (name == "pareto") {
        const auto eq = args.find('=');
        if (args.rfind("beta=", 0) != 0 || eq == std::string::npos)
            throw std::invalid_argument("pareto: expected pareto:beta=<v>");
        return symmetric_pareto(std::stod(args.substr(eq + 1)));
    }
    if (name == "shift") {
        // shift:m=<v>,base=<spec>  (base spec runs to the end of the string)
        const auto mpos = args.find("m=");
        const auto bpos = args.find("base=");
        if (mpos == std::string::npos || bpos == std::string::npos)
            throw std::invalid_argument("shift: expected shift:m=<v>,base=<spec>");
        const double m = std::stod(args.substr(mpos + 2));
        return shifted(parse(args.substr(bpos + 5)), m);
    }
    if (name == "regime") {
        double p = 0.0, ap = 1.0, am = 1.0;
        std::stringstream ss(args);
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("regime: expected key=value list");
            const std::string key = kv.substr(0, eq);
            const double val = std::stod(kv.substr(eq + 1));
            if (key == "p") p = val;
            else if (key == "aplus") ap = val;
            else if (key == "aminus") am = val;
            else throw std::invalid_argument("regime: unknown key '" + key + "'");
        }
        if (p == 0.0) throw std::invalid_argument("regime: p is required");
        return regime_pareto(p, ap, am);
    }
    throw std::invalid_argument("unknown displacement law '" + spec + "'");
}

} // namespace snakes
