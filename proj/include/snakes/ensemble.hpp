#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snakes/displacement.hpp"
#include "snakes/offspring.hpp"
#include "snakes/plane_tree.hpp"
#include "snakes/spatial_snake.hpp"

namespace snakes {

/**
 * ExperimentSpec — one Monte Carlo ensemble: an offspring law, an optional
 * displacement law, a grid of sizes, a replica count and a list of named
 * statistics. Fully determined by the master seed: replica i of size n draws
 * from the stream derived from (seed, n, i), independent of scheduling.
 */
struct ExperimentSpec {
    std::string name = "ensemble";
    std::string offspring = "geometric:0.5";
    std::string displacement;              // empty: trees only
    std::vector<std::int64_t> n_grid;
    std::size_t replicas = 1;
    std::vector<std::string> stats;        // e.g. "lambda_scaled", "holder:gamma=0.4"
    std::uint64_t seed = 1;
    std::string out_dir;                   // empty: keep results in memory only
    std::string fixture_tree;              // tree CSV path; bypasses sampling

    void validate() const;
};

/// Per-(n, statistic) aggregate; samples stay ordered by replica index.
struct EnsembleAggregate {
    std::vector<std::pair<std::uint32_t, double>> samples;   // (replica, value)
    double mean = 0.0;
    double variance = 0.0;
    double stderr_ = 0.0;
    std::map<std::string, double> quantiles;   // q01 q25 q50 q75 q99, monotone

    void finalize();
};

struct EnsembleResult {
    ExperimentSpec spec;
    // keyed by n, then statistic name
    std::map<std::int64_t, std::map<std::string, EnsembleAggregate>> table;

    /// Associative merge of partial results (disjoint or overlapping replica sets).
    void merge(const EnsembleResult& other);
    std::string to_json() const;
    std::string to_csv() const;
};

/// Runs the ensemble; per-replica checkpoints go under out_dir/ckpt when
/// out_dir is set, and completed replicas are not recomputed on resume.
EnsembleResult run_ensemble(const ExperimentSpec& spec);

/// JSON config with keys: offspring, displacement, n_grid, replicas, seed,
/// stats, out_dir (and optionally name, fixture_tree).
ExperimentSpec load_experiment_config(const std::string& path);

/// The named experiments mirroring the studied regimes; an unknown name throws.
std::vector<ExperimentSpec> builtin_experiment(const std::string& name);
std::vector<std::string> builtin_experiment_names();

/// The stream for replica i of size n under a master seed.
Rng replica_rng(std::uint64_t seed, std::int64_t n, std::uint64_t replica);

/// Evaluates one named statistic; exposed for tests and the CLI.
struct ReplicaContext {
    const PlaneTree* tree = nullptr;
    const SpatialSnake* snake = nullptr;   // null when no displacement law is set
    std::int64_t n = 0;
    double b_n = 1.0;
    double alpha = 2.0;
    Rng* rng = nullptr;
};
double eval_statistic(const std::string& stat, const ReplicaContext& ctx);
/// True when the statistic needs a decorated snake.
bool statistic_needs_snake(const std::string& stat);

} // namespace snakes
