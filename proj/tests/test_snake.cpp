#include "doctest.h"

#include <cmath>

#include "snakes/spatial_snake.hpp"
#include "snakes/tree_codec.hpp"
#include "snakes/tree_sampler.hpp"

using namespace snakes;

namespace {

PlaneTree figure_tree() {
    return PlaneTree({4, 0, 0, 2, 1, 4, 0, 0, 0, 0, 0, 2, 3, 0, 0, 0, 0});
}

// per-vertex displacements of the worked spatial example
std::vector<double> figure_displacements() {
    return {0, -1, -2, 1, -1, 0, -1, -2, -1, 0, 0, 0, -1, -1, 1, 0, 0};
}

} // namespace

TEST_CASE("worked example: spatial height process") {
    const auto tree = figure_tree();
    const auto snake = decorate_with(tree, figure_displacements());
    CHECK(snake.position ==
          std::vector<double>{0, -1, -2, 1, 0, 0, -1, -2, -1, 0, 1, 0, -1, -2, 0, -1, 0});
}

TEST_CASE("zero displacements give zero processes") {
    const auto tree = figure_tree();
    const auto snake = decorate_with(tree, std::vector<double>(17, 0.0));
    for (const double v : snake.position) CHECK(v == 0.0);
    for (const double v : snake.contour_position) CHECK(v == 0.0);
}

TEST_CASE("chain with unit displacements reproduces the height process") {
    const auto tree = chain_tree(16);
    const auto snake = decorate_with(tree, std::vector<double>(16, 1.0));
    const auto h = height(tree);
    for (std::size_t j = 0; j < snake.position.size(); ++j)
        CHECK(snake.position[j] == static_cast<double>(h[j]));
}

TEST_CASE("spatial contour agrees with spatial height at first visits") {
    const auto law = OffspringLaw::geometric();
    const auto disp = DisplacementLaw::uniform_interval(-1.0, 1.0);
    Rng rng(73);
    const auto tree = sample_tree(law, 150, rng);
    const auto snake = decorate(tree, disp, rng);

    const auto seq = contour_vertices(tree);
    std::vector<std::int64_t> first_visit(tree.vertex_count(), -1);
    for (std::size_t t = 0; t < seq.size(); ++t)
        if (first_visit[seq[t]] < 0) first_visit[seq[t]] = static_cast<std::int64_t>(t);
    for (std::size_t v = 0; v < tree.vertex_count(); ++v)
        CHECK(snake.contour_position[static_cast<std::size_t>(first_visit[v])] ==
              snake.position[v]);
}

TEST_CASE("decorate is deterministic given (tree, seed)") {
    const auto law = OffspringLaw::geometric();
    const auto disp = DisplacementLaw::symmetric_pareto(4.0);
    Rng rng(79);
    const auto tree = sample_tree(law, 100, rng);
    Rng r1 = Rng::stream(99, 0), r2 = Rng::stream(99, 0);
    const auto s1 = decorate(tree, disp, r1);
    const auto s2 = decorate(tree, disp, r2);
    CHECK(s1.displacement == s2.displacement);
    CHECK(s1.position == s2.position);
}

TEST_CASE("cutoff: all displacements small") {
    const auto tree = figure_tree();
    const auto snake = decorate_with(tree, figure_displacements());
    const auto dec = cutoff(snake, 10.0);
    CHECK(dec.large_count == 0);
    CHECK(!dec.nested_large_jumps);
    for (const double v : dec.large_position) CHECK(v == 0.0);
    for (std::size_t j = 0; j < snake.position.size(); ++j)
        CHECK(dec.small_position[j] == snake.position[j]);
}

TEST_CASE("cutoff: a single large jump dominates the large process") {
    // 5-vertex tree: root - a - b, root - c - d; big jump on edge to b
    const auto tree = PlaneTree({2, 1, 0, 1, 0});
    auto disp = std::vector<double>{0, 0.5, 100.0, -0.25, 0.5};
    const auto snake = decorate_with(tree, disp);
    const auto dec = cutoff(snake, 2.0);
    CHECK(dec.large_count == 1);
    CHECK(!dec.nested_large_jumps);
    double max_large = 0.0;
    for (const double v : dec.large_position) max_large = std::max(max_large, std::abs(v));
    CHECK(max_large == 100.0);
}

TEST_CASE("cutoff: two large jumps on one branch raise the nested flag") {
    const auto tree = chain_tree(3);
    const auto snake = decorate_with(tree, {0, 50.0, -60.0});
    const auto dec = cutoff(snake, 2.0);
    CHECK(dec.large_count == 2);
    CHECK(dec.nested_large_jumps);

    // two large jumps on different branches do not
    const auto star = star_tree(2);
    const auto snake2 = decorate_with(star, {0, 50.0, -60.0});
    CHECK(!cutoff(snake2, 2.0).nested_large_jumps);
}

TEST_CASE("cutoff split is exact: small + large == position, bitwise") {
    const auto law = OffspringLaw::geometric();
    const auto disp = DisplacementLaw::symmetric_pareto(2.5);
    Rng rng(83);
    for (int rep = 0; rep < 50; ++rep) {
        const auto tree = sample_tree(law, 1 + static_cast<std::int64_t>(rng.next_below(400)), rng);
        const auto snake = decorate(tree, disp, rng);
        const auto dec = cutoff(snake, 1.5);
        for (std::size_t j = 0; j < snake.position.size(); ++j)
            CHECK(dec.small_position[j] + dec.large_position[j] == snake.position[j]);
    }
}

TEST_CASE("cutoff threshold formula") {
    // alpha = 2, p = 2: exponent 1/8 + eps
    const double b = cutoff_threshold(10000, 100.0, 2.0, 2.0, 0.0);
    CHECK(b == doctest::Approx(std::pow(1e8 / 100.0, 0.125)));
    CHECK(cutoff_threshold(10000, 100.0, 2.0, 2.0, 0.01) > b);
}

TEST_CASE("conditional moments: centred law") {
    const auto law = OffspringLaw::geometric();
    Rng rng(89);
    const auto tree = sample_tree(law, 200, rng);
    const auto report = conditional_moment_check(tree, DisplacementLaw::uniform3(),
                                                 {10, 50, 100, 150, 200}, 4000, 11);
    CHECK(report.all_within(4.0));
    for (const auto& probe : report.probes) {
        CHECK(std::abs(probe.mean) < 1.0);            // centred
        CHECK(probe.second_scaled == doctest::Approx(1.0).epsilon(0.2));
    }
}

TEST_CASE("conditional moments: shifted law has mean m per generation") {
    const auto law = OffspringLaw::geometric();
    Rng rng(97);
    const auto tree = sample_tree(law, 200, rng);
    const auto disp = DisplacementLaw::shifted(DisplacementLaw::uniform3(), 1.0);
    CHECK(disp.mean() == 1.0);
    const auto report = conditional_moment_check(tree, disp, {20, 120}, 4000, 13);
    CHECK(report.all_within(4.0));
    const auto h = height(tree);
    for (const auto& probe : report.probes)
        CHECK(probe.mean == doctest::Approx(static_cast<double>(h[probe.index])).epsilon(0.1));
}

TEST_CASE("displacement law moments and tails") {
    CHECK(DisplacementLaw::uniform3().second_moment() == doctest::Approx(2.0 / 3.0));
    CHECK(DisplacementLaw::uniform_interval(-1, 1).second_moment() == doctest::Approx(1.0 / 3.0));
    CHECK(DisplacementLaw::uniform_interval(-0.5, 0.5).second_moment() ==
          doctest::Approx(1.0 / 12.0));

    const auto pareto = DisplacementLaw::symmetric_pareto(10.0);
    CHECK(pareto.second_moment() == doctest::Approx(2.0 / (9.0 * 8.0)));
    CHECK(pareto.survival_gt(2.0) == doctest::Approx(0.5 * std::pow(3.0, -10.0)));
    CHECK(pareto.survival_abs_ge(2.0) == doctest::Approx(std::pow(3.0, -10.0)));
    CHECK(pareto.survival_abs_ge(0.0) == 1.0);

    CHECK(DisplacementLaw::uniform3().survival_abs_ge(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(DisplacementLaw::uniform3().survival_abs_gt(1.0) == 0.0);
}

TEST_CASE("regime law calibration hits the finite-n tail equation") {
    const std::int64_t n = 100000;
    const double b_n = std::sqrt(static_cast<double>(n));   // geometric sigma^2 = 2
    const auto recipe = DisplacementLaw::regime_pareto(2.0, 1.0, 1.0);
    CHECK(recipe.needs_calibration());
    CHECK_THROWS_AS(recipe.survival_ge(1.0), std::logic_error);

    const auto law = recipe.materialize(n, b_n, 2.0);
    const double threshold = std::sqrt(static_cast<double>(n) / b_n);
    CHECK(static_cast<double>(n) * law.survival_ge(threshold) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(static_cast<double>(n) * law.survival_abs_ge(threshold) ==
          doctest::Approx(2.0).epsilon(1e-9));
    // kappa = p alpha/(alpha-1) = 4: fourth-power tail in y
    CHECK(law.survival_abs_ge(2.0 * threshold) * 16.0 ==
          doctest::Approx(law.survival_abs_ge(threshold)).epsilon(1e-9));
    CHECK(law.mean() == 0.0);
    CHECK(std::isfinite(law.second_moment()));

    // empirical check of the tail mass
    Rng rng(101);
    std::int64_t hits = 0;
    const int draws = 2000000;
    for (int i = 0; i < draws; ++i)
        if (std::abs(law.sample(rng)) >= threshold) ++hits;
    const double expect = 2.0 / static_cast<double>(n) * draws;
    CHECK(std::abs(static_cast<double>(hits) - expect) < 4.0 * std::sqrt(expect));
}

TEST_CASE("asymmetric regime law keeps mean zero") {
    const auto law = DisplacementLaw::regime_pareto(2.0, 2.0, 0.5).materialize(10000, 100.0, 2.0);
    const double threshold = std::sqrt(10000.0 / 100.0);
    CHECK(10000.0 * law.survival_ge(threshold) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(10000.0 * (1.0 - law.survival_gt(-threshold)) == doctest::Approx(0.5).epsilon(1e-9));

    Rng rng(103);
    double sum = 0.0;
    const int draws = 4000000;
    for (int i = 0; i < draws; ++i) sum += law.sample(rng);
    const double se = std::sqrt(law.second_moment() / draws);
    CHECK(std::abs(sum / draws) < 4.0 * se);
}

TEST_CASE("displacement parse syntax") {
    CHECK(DisplacementLaw::parse("uniform3").describe() == "uniform3");
    CHECK(DisplacementLaw::parse("uniform:-0.5,0.5").second_moment() ==
          doctest::Approx(1.0 / 12.0));
    CHECK(DisplacementLaw::parse("pareto:beta=10").survival_gt(0.0) == doctest::Approx(0.5));
    CHECK(DisplacementLaw::parse("shift:m=1,base=uniform3").mean() == 1.0);
    CHECK(DisplacementLaw::parse("regime:p=0.6,aplus=1,aminus=1").regime_p() == 0.6);
    CHECK_THROWS_AS(DisplacementLaw::parse("gauss:1"), std::invalid_argument);
    CHECK_THROWS_AS(DisplacementLaw::parse("uniform:1"), std::invalid_argument);
}
