#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "snakes/ensemble.hpp"
#include "snakes/gof.hpp"
#include "snakes/serialize.hpp"
#include "snakes/tree_codec.hpp"
#include "snakes/tree_sampler.hpp"

using namespace snakes;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("ks test: quantile grid and degenerate samples") {
    std::vector<double> quantiles;
    for (int i = 1; i <= 100; ++i) quantiles.push_back((i - 0.5) / 100.0);
    CHECK(ks_test_uniform(quantiles) > 0.99);

    CHECK(ks_test_uniform(std::vector<double>(100, 0.0)) < 1e-6);

    CHECK_THROWS_AS(ks_test_uniform({0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("kolmogorov survival: known values and branch continuity") {
    // classic 5% critical value
    CHECK(kolmogorov_survival(1.358) == doctest::Approx(0.05).epsilon(2e-3));
    // the two theta forms hand-evaluated at lambda = 1: Q(1) = 0.26999...
    CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.2700).epsilon(1e-3));
    CHECK(std::abs(kolmogorov_survival(1.1799) - kolmogorov_survival(1.1801)) < 5e-4);
    CHECK(kolmogorov_survival(0.3) > 0.999);
    CHECK(kolmogorov_survival(2.0) < 1e-3);
}

TEST_CASE("chi-square: exact and degenerate cases") {
    CHECK(chi_square_uniform({20000, 20000, 20000, 20000, 20000}) == doctest::Approx(1.0));
    CHECK(chi_square_uniform({100000, 0, 0, 0, 0}) < 1e-6);
    CHECK_THROWS_AS(chi_square_uniform({3, 2, 1}), std::invalid_argument);   // undersampled

    // gamma_q against known chi-square quantiles: P(chi2_1 > 3.841) = 0.05
    CHECK(gamma_q(0.5, 3.841 / 2.0) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(gamma_q(2.0, 9.488 / 2.0) == doctest::Approx(0.05).epsilon(1e-3));   // 4 dof
}

TEST_CASE("tail slope: exact power table") {
    std::vector<double> xs, surv;
    for (int i = 0; i <= 12; ++i) {
        const double x = std::pow(10.0, i / 4.0);
        xs.push_back(x);
        surv.push_back(std::pow(x, -4.0));
    }
    const auto fit = tail_slope(xs, surv);
    CHECK(fit.slope == doctest::Approx(-4.0).epsilon(1e-6));
    CHECK(fit.stderr_ < 1e-9);

    CHECK_THROWS_AS(tail_slope({1.0, 2.0, 3.0}, {0.5, 0.3, 0.2}), std::invalid_argument);
}

TEST_CASE("tail slope from samples: pareto draws") {
    Rng rng(157);
    std::vector<double> samples;
    for (int i = 0; i < 200000; ++i) samples.push_back(std::pow(rng.next_double_pos(), -1.0 / 3.0));
    const auto fit = tail_slope_from_samples(samples, 1.0, 30.0, 12, 1.0);
    CHECK(fit.slope == doctest::Approx(-3.0).epsilon(0.05));
}

TEST_CASE("ensemble: fixture tree statistic") {
    const std::string dir = "ensemble_fixture_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_tree_csv(PlaneTree({4, 0, 0, 2, 1, 4, 0, 0, 0, 0, 0, 2, 3, 0, 0, 0, 0}),
                   dir + "/fig.csv");

    ExperimentSpec spec;
    spec.offspring = "geometric:0.5";
    spec.n_grid = {16};
    spec.replicas = 1;
    spec.stats = {"lambda"};
    spec.seed = 5;
    spec.fixture_tree = dir + "/fig.csv";
    const auto result = run_ensemble(spec);
    CHECK(result.table.at(16).at("lambda").mean == 40.0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("ensemble: determinism gives byte-identical outputs") {
    ExperimentSpec spec;
    spec.offspring = "poisson:1";
    spec.displacement = "uniform3";
    spec.n_grid = {50, 120};
    spec.replicas = 20;
    spec.stats = {"lambda_scaled", "max_step_scaled:p=2"};
    spec.seed = 99;

    const std::string d1 = "ensemble_det_a", d2 = "ensemble_det_b";
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
    spec.out_dir = d1;
    run_ensemble(spec);
    spec.out_dir = d2;
    run_ensemble(spec);
    CHECK(slurp(d1 + "/result.json") != "");
    CHECK(slurp(d1 + "/result.csv") == slurp(d2 + "/result.csv"));

    // resuming from checkpoints reproduces the same result bytes
    const std::string before = slurp(d1 + "/result.json");
    std::filesystem::remove(d1 + "/result.json");
    run_ensemble(spec);   // d2 spec… rerun d1
    spec.out_dir = d1;
    run_ensemble(spec);
    CHECK(slurp(d1 + "/result.json") == before);

    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
}

TEST_CASE("ensemble: merge is associative and order-insensitive") {
    ExperimentSpec spec;
    spec.offspring = "geometric:0.5";
    spec.n_grid = {80};
    spec.stats = {"lambda"};
    spec.seed = 7;

    spec.replicas = 30;
    const auto full = run_ensemble(spec);

    // split replicas across two partial runs sharing the seed
    ExperimentSpec lo = spec, hi = spec;
    lo.replicas = 13;
    const auto part_lo = run_ensemble(lo);
    EnsembleResult part_hi;
    part_hi.spec = spec;
    {
        // replicas 13..29 computed independently
        const OffspringLaw law = OffspringLaw::parse(spec.offspring);
        for (std::uint64_t i = 13; i < 30; ++i) {
            Rng rng = replica_rng(spec.seed, 80, i);
            const auto tree = sample_tree(law, 80, rng);
            part_hi.table[80]["lambda"].samples.emplace_back(
                static_cast<std::uint32_t>(i), static_cast<double>(total_path_length(tree)));
        }
        for (auto& [n, stats_map] : part_hi.table)
            for (auto& [stat, agg] : stats_map) agg.finalize();
    }

    EnsembleResult merged_a = part_lo;
    merged_a.merge(part_hi);
    EnsembleResult merged_b = part_hi;
    merged_b.merge(part_lo);
    CHECK(merged_a.table.at(80).at("lambda").samples == full.table.at(80).at("lambda").samples);
    CHECK(merged_a.table.at(80).at("lambda").mean == full.table.at(80).at("lambda").mean);
    CHECK(merged_b.table.at(80).at("lambda").mean == full.table.at(80).at("lambda").mean);
}

TEST_CASE("ensemble: quantiles are monotone") {
    ExperimentSpec spec;
    spec.offspring = "geometric:0.5";
    spec.n_grid = {60};
    spec.replicas = 50;
    spec.stats = {"lambda", "holder:gamma=0.4", "progeny"};
    spec.seed = 3;
    const auto result = run_ensemble(spec);
    for (const auto& [stat, agg] : result.table.at(60)) {
        CHECK(agg.quantiles.at("q01") <= agg.quantiles.at("q25"));
        CHECK(agg.quantiles.at("q25") <= agg.quantiles.at("q50"));
        CHECK(agg.quantiles.at("q50") <= agg.quantiles.at("q75"));
        CHECK(agg.quantiles.at("q75") <= agg.quantiles.at("q99"));
        CHECK(agg.samples.size() == 50);
    }
}

TEST_CASE("experiment config and builtin names") {
    const std::string path = "experiment_config_test.json";
    {
        std::ofstream out(path);
        out << R"({"offspring":"geometric:0.5","displacement":"uniform3","n_grid":[100],)"
            << R"("replicas":5,"seed":42,"stats":["lambda_scaled"],"out_dir":""})";
    }
    const auto spec = load_experiment_config(path);
    CHECK(spec.replicas == 5);
    CHECK(spec.displacement == "uniform3");
    std::remove(path.c_str());

    for (const auto& name : builtin_experiment_names()) CHECK(!builtin_experiment(name).empty());
    CHECK_THROWS_AS(builtin_experiment("thm9"), std::invalid_argument);

    ExperimentSpec bad;
    bad.n_grid = {100, 100};
    bad.stats = {"lambda"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("statistic registry") {
    const auto tree = chain_tree(5);
    ReplicaContext ctx;
    ctx.tree = &tree;
    ctx.n = 4;
    ctx.b_n = 2.0;
    Rng rng(1);
    ctx.rng = &rng;
    CHECK(eval_statistic("lambda", ctx) == 10.0);
    CHECK(eval_statistic("lambda_scaled", ctx) == doctest::Approx(2.0 * 10.0 / 16.0));
    CHECK_THROWS_AS(eval_statistic("peak_count", ctx), std::invalid_argument);   // needs snake
    CHECK_THROWS_AS(eval_statistic("nope", ctx), std::invalid_argument);
    CHECK(statistic_needs_snake("peak_count:eta=1"));
    CHECK(!statistic_needs_snake("lambda"));
}

TEST_CASE("binary process dump round-trips") {
    const std::vector<std::int64_t> values{0, 3, -1, 1 << 20, -(1LL << 40)};
    write_i64_dump(values, "dump_test.bin");
    CHECK(read_i64_dump("dump_test.bin") == values);
    std::remove("dump_test.bin");
}
