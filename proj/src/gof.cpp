#include "snakes/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snakes {

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // theta-function form, fast for small lambda
        const double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
        const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                           (t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0));
        return 1.0 - cdf;
    }
    const double e = std::exp(-2.0 * lambda * lambda);
    double q = 0.0, sign = 1.0;
    for (int k = 1; k <= 16; ++k) {
        const double term = std::pow(e, static_cast<double>(k) * k);
        q += 2.0 * sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

double ks_test(std::vector<double> samples, const std::function<double(double)>& reference_cdf) {
    if (samples.size() < 20) throw std::invalid_argument("ks_test: need >= 20 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = reference_cdf(samples[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    const double sqrt_n = std::sqrt(n);
    return kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

double ks_test_uniform(std::vector<double> samples) {
    return ks_test(std::move(samples),
                   [](double x) { return std::clamp(x, 0.0, 1.0); });
}

namespace {

double gamma_q_series(double s, double x) {
    // P(s, x) by series, then Q = 1 - P
    double term = 1.0 / s, sum = term, a = s;
    for (int i = 0; i < 1000; ++i) {
        a += 1.0;
        term *= x / a;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_contfrac(double s, double x) {
    // Lentz continued fraction for Q(s, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

} // namespace

double gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return x < s + 1.0 ? gamma_q_series(s, x) : gamma_q_contfrac(s, x);
}

double chi_square_uniform(const std::vector<std::int64_t>& counts) {
    if (counts.size() < 2) throw std::invalid_argument("chi-square: need >= 2 cells");
    std::int64_t total = 0;
    for (const auto c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    if (expected < 5.0) throw std::invalid_argument("chi-square: expected count < 5 per cell");
    double stat = 0.0;
    for (const auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return gamma_q(static_cast<double>(counts.size() - 1) / 2.0, stat / 2.0);
}

double chi_square_two_sample(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("chi-square two-sample: matching cell vectors required");
    std::int64_t ta = 0, tb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) { ta += a[i]; tb += b[i]; }
    if (ta == 0 || tb == 0) throw std::invalid_argument("chi-square two-sample: empty sample");
    double stat = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double pooled = static_cast<double>(a[i] + b[i]) / static_cast<double>(ta + tb);
        const double ea = pooled * static_cast<double>(ta);
        const double eb = pooled * static_cast<double>(tb);
        if (ea < 5.0 || eb < 5.0)
            throw std::invalid_argument("chi-square two-sample: expected count < 5 per cell");
        stat += (static_cast<double>(a[i]) - ea) * (static_cast<double>(a[i]) - ea) / ea;
        stat += (static_cast<double>(b[i]) - eb) * (static_cast<double>(b[i]) - eb) / eb;
    }
    return gamma_q(static_cast<double>(a.size() - 1) / 2.0, stat / 2.0);
}

SlopeFit tail_slope(const std::vector<double>& xs, const std::vector<double>& survival,
                    double min_decades) {
    if (xs.size() != survival.size() || xs.size() < 3)
        throw std::invalid_argument("tail_slope: need >= 3 table rows");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0.0 && survival[i] > 0.0) {
            lx.push_back(std::log10(xs[i]));
            ly.push_back(std::log10(survival[i]));
        }
    }
    if (lx.size() < 3) throw std::invalid_argument("tail_slope: too few positive rows");
    const auto [lo, hi] = std::minmax_element(lx.begin(), lx.end());
    if (*hi - *lo < min_decades)
        throw std::invalid_argument("tail_slope: x-range spans less than the required decades");

    const double m = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) { sx += lx[i]; sy += ly[i]; }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit fit;
    fit.points = lx.size();
    fit.slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - my - fit.slope * (lx[i] - mx);
        ss_res += r * r;
    }
    fit.stderr_ = lx.size() > 2 ? std::sqrt(ss_res / (m - 2.0) / sxx) : 0.0;
    return fit;
}

SlopeFit tail_slope_from_samples(const std::vector<double>& samples, double lo, double hi,
                                 std::size_t grid_points, double min_decades,
                                 std::size_t min_tail_count) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("tail_slope: need 0 < lo < hi");
    if (grid_points < 3) throw std::invalid_argument("tail_slope: need >= 3 grid points");
    std::vector<double> xs, surv;
    const double n = static_cast<double>(samples.size());
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(k) /
                                                    static_cast<double>(grid_points - 1));
        std::size_t count = 0;
        for (const double s : samples)
            if (s > x) ++count;
        if (count >= min_tail_count) {
            xs.push_back(x);
            surv.push_back(static_cast<double>(count) / n);
        }
    }
    return tail_slope(xs, surv, min_decades);
}

} // namespace snakes
