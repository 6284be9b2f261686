#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "snakes/offspring.hpp"

using namespace snakes;

namespace {

// Closed-form series sums for geometric(1/2), evaluated independently.
struct SeriesMoments {
    double total = 0.0, mean = 0.0, second = 0.0;
};
SeriesMoments geometric_series(int terms) {
    SeriesMoments m;
    for (int k = 0; k < terms; ++k) {
        const double p = std::ldexp(1.0, -k - 1);
        m.total += p;
        m.mean += k * p;
        m.second += static_cast<double>(k) * k * p;
    }
    return m;
}

} // namespace

TEST_CASE("geometric(1/2): exact pmf and moments") {
    const auto law = OffspringLaw::geometric();
    for (int k = 0; k <= 20; ++k)
        CHECK(law.pmf(k) == doctest::Approx(std::ldexp(1.0, -k - 1)).epsilon(1e-13));

    const auto series = geometric_series(120);
    CHECK(std::abs(series.mean - 1.0) < 1e-12);
    CHECK(std::abs(series.second - series.mean * series.mean - 2.0) < 1e-12);
    CHECK(std::abs(law.mean() - 1.0) < 1e-12);
    CHECK(std::abs(law.sigma2() - 2.0) < 1e-9);
    CHECK(law.mu0() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(law.period() == 1);
    CHECK(law.finite_variance());

    CHECK_THROWS_AS(OffspringLaw::geometric(0.4), std::invalid_argument);
}

TEST_CASE("binary law: two-point support, period 2") {
    const auto law = OffspringLaw::binary();
    CHECK(law.pmf(0) == 0.5);
    CHECK(law.pmf(1) == 0.0);
    CHECK(law.pmf(2) == 0.5);
    CHECK(law.sigma2() == doctest::Approx(1.0));
    CHECK(law.period() == 2);

    Rng rng(7);
    std::int64_t zeros = 0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const int k = law.sample(rng);
        REQUIRE((k == 0 || k == 2));
        if (k == 0) ++zeros;
    }
    const double z = (static_cast<double>(zeros) - draws / 2.0) / std::sqrt(draws / 4.0);
    CHECK(std::abs(z) < 4.0);
}

TEST_CASE("poisson(1): factorial masses") {
    const auto law = OffspringLaw::poisson1();
    double fact = 1.0;
    for (int k = 0; k <= 12; ++k) {
        if (k > 0) fact *= k;
        CHECK(law.pmf(k) == doctest::Approx(std::exp(-1.0) / fact).epsilon(1e-12));
    }
    CHECK(std::abs(law.mean() - 1.0) < 1e-12);
    CHECK(std::abs(law.sigma2() - 1.0) < 1e-9);
}

TEST_CASE("built-in laws: criticality sums within 1e-12") {
    for (const auto* spec : {"geometric:0.5", "poisson:1", "binary"}) {
        const auto law = OffspringLaw::parse(spec);
        double total = 0.0, mean = 0.0;
        for (int k = 0; k < 256; ++k) {
            total += law.pmf(k);
            mean += k * law.pmf(k);
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(std::abs(mean - 1.0) < 1e-12);
    }
    CHECK(std::abs(OffspringLaw::stable_tail(1.3).mean() - 1.0) < 1e-12);
}

TEST_CASE("empirical mean of 1e6 draws within 4 sigma/1e3 of 1") {
    for (const auto* spec : {"geometric:0.5", "poisson:1", "binary"}) {
        const auto law = OffspringLaw::parse(spec);
        Rng rng(11);
        const int draws = 1000000;
        std::int64_t sum = 0;
        for (int i = 0; i < draws; ++i) sum += law.sample(rng);
        const double mean = static_cast<double>(sum) / draws;
        CHECK(std::abs(mean - 1.0) < 4.0 * std::sqrt(law.sigma2()) / 1000.0);
    }
}

TEST_CASE("stable-tail(1.3): empirical tail matches the exact table sums") {
    const auto law = OffspringLaw::stable_tail(1.3);
    Rng rng(1234);
    const int draws = 10000000;
    std::int64_t ge10 = 0, ge100 = 0;
    for (int i = 0; i < draws; ++i) {
        const int k = law.sample(rng);
        if (k >= 10) ++ge10;
        if (k >= 100) ++ge100;
    }
    for (const auto& [threshold, count] : {std::pair{10, ge10}, std::pair{100, ge100}}) {
        const double p = law.survival(threshold);
        const double se = std::sqrt(p * (1.0 - p) * draws);
        CHECK(std::abs(static_cast<double>(count) - p * draws) < 3.0 * se);
    }
}

TEST_CASE("stable-tail: analytic tail consistent with direct partial sums") {
    const auto law = OffspringLaw::stable_tail(1.5);
    const std::int64_t start = 1 << 21;   // beyond any table size
    double direct = 0.0;
    for (std::int64_t k = start; k < start + 20000; ++k) direct += law.pmf(k);
    const double via_survival = law.survival(start) - law.survival(start + 20000);
    CHECK(direct == doctest::Approx(via_survival).epsilon(1e-9));

    CHECK_THROWS_AS(OffspringLaw::stable_tail(0.9), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw::stable_tail(2.5), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw::stable_tail(1.3, 10.0), std::invalid_argument);
}

TEST_CASE("custom law: validation and CSV parse") {
    CHECK_NOTHROW(OffspringLaw::custom({0.25, 0.5, 0.25}));
    CHECK_THROWS_AS(OffspringLaw::custom({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw::custom({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw::custom({0.3, 0.3, 0.3}), std::invalid_argument);

    const std::string path = "custom_law_test.csv";
    {
        std::ofstream out(path);
        out << "k,prob\n0,0.25\n1,0.5\n2,0.25\n";
    }
    const auto law = OffspringLaw::parse("custom:@" + path);
    CHECK(law.pmf(1) == doctest::Approx(0.5));
    std::remove(path.c_str());
}

TEST_CASE("normalization: exact finite-variance values") {
    const auto geo = OffspringLaw::geometric();
    const auto bn = normalization_for(geo, NormalizationMode::finite_variance_exact);
    CHECK(bn(10000) == doctest::Approx(100.0).epsilon(1e-12));

    const auto bin = OffspringLaw::binary();
    CHECK(normalization_for(bin, NormalizationMode::finite_variance_exact)(10000) ==
          doctest::Approx(std::sqrt(5000.0)).epsilon(1e-12));

    const auto stab = OffspringLaw::stable_tail(1.3);
    CHECK_THROWS_AS(normalization_for(stab, NormalizationMode::finite_variance_exact),
                    std::invalid_argument);

    for (std::int64_t n : {100, 10000, 1000000}) {
        CHECK(normalization_for(geo, NormalizationMode::finite_variance_exact)(n) /
                  std::sqrt(static_cast<double>(n)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("quantile normalization: monotone, log-log slope 1/alpha") {
    const auto stab = OffspringLaw::stable_tail(1.3);
    const auto bn = normalization_for(stab, NormalizationMode::quantile_calibrated);

    double prev = 0.0;
    std::vector<double> lx, ly;
    for (double e = 3.0; e <= 6.01; e += 0.25) {
        const auto n = static_cast<std::int64_t>(std::pow(10.0, e));
        const double b = bn(n);
        CHECK(b >= prev);
        prev = b;
        lx.push_back(std::log10(static_cast<double>(n)));
        ly.push_back(std::log10(b));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    CHECK(sxy / sxx == doctest::Approx(1.0 / 1.3).epsilon(0.07));
}

TEST_CASE("law parse errors") {
    CHECK_THROWS_AS(OffspringLaw::parse("zipf:2"), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw::parse("stable:c=0.1"), std::invalid_argument);
    CHECK_THROWS_AS(OffspringLaw::parse("poisson:2"), std::invalid_argument);
}
