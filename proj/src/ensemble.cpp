#include "snakes/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "snakes/serialize.hpp"
#include "snakes/snake_stats.hpp"
#include "snakes/tree_codec.hpp"
#include "snakes/tree_sampler.hpp"

namespace snakes {

using nlohmann::json;

namespace {

struct StatSpec {
    std::string base;
    std::map<std::string, double> args;
};

StatSpec parse_stat(const std::string& stat) {
    StatSpec s;
    const auto colon = stat.find(':');
    s.base = stat.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream ss(stat.substr(colon + 1));
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("statistic '" + stat + "': expected key=value args");
            s.args[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
    }
    return s;
}

double arg_or(const StatSpec& s, const std::string& key, double fallback) {
    const auto it = s.args.find(key);
    return it == s.args.end() ? fallback : it->second;
}

const char* provenance_of(const std::string& base) {
    if (base == "lambda" || base == "lambda_scaled") return "tree_codec/total_path_length";
    if (base == "holder") return "snake_stats/holder_statistic";
    if (base == "max_step_scaled") return "spatial_snake/decorate";
    if (base == "peak_count") return "snake_stats/extract_peaks";
    if (base == "small_jump_max_scaled") return "spatial_snake/cutoff";
    if (base == "noncentred_residual") return "spatial_snake/decorate";
    if (base == "progeny") return "snake_stats/uniform_vertex_progeny";
    if (base == "inversion_fluct") return "snake_stats/inversions";
    return "unknown";
}

} // namespace

bool statistic_needs_snake(const std::string& stat) {
    const std::string base = parse_stat(stat).base;
    return base == "max_step_scaled" || base == "peak_count" ||
           base == "small_jump_max_scaled" || base == "noncentred_residual";
}

double eval_statistic(const std::string& stat, const ReplicaContext& ctx) {
    const StatSpec s = parse_stat(stat);
    const auto need_snake = [&]() {
        if (ctx.snake == nullptr)
            throw std::invalid_argument("statistic '" + stat + "' needs a displacement law");
        return ctx.snake;
    };
    const double n = static_cast<double>(ctx.n);

    if (s.base == "lambda") return static_cast<double>(total_path_length(*ctx.tree));
    if (s.base == "lambda_scaled")
        return ctx.b_n / (n * n) * static_cast<double>(total_path_length(*ctx.tree));
    if (s.base == "holder") {
        const double gamma = arg_or(s, "gamma", 0.4);
        return holder_statistic(height(*ctx.tree), ctx.b_n, gamma);
    }
    if (s.base == "max_step_scaled") {
        const auto* snake = need_snake();
        const double p = arg_or(s, "p", 2.0);
        double max_step = 0.0;
        for (std::size_t j = 0; j + 1 < snake->position.size(); ++j)
            max_step = std::max(max_step, std::abs(snake->position[j + 1] - snake->position[j]));
        return std::pow(ctx.b_n / n, 1.0 / p) * max_step;
    }
    if (s.base == "peak_count") {
        const auto* snake = need_snake();
        const double p = arg_or(s, "p", 2.0);
        const double eta = arg_or(s, "eta", 1.0);
        const double scale = std::pow(n / ctx.b_n, 1.0 / p);
        return static_cast<double>(extract_peaks(*snake, scale, eta).size());
    }
    if (s.base == "small_jump_max_scaled") {
        const auto* snake = need_snake();
        const double p = arg_or(s, "p", 2.0);
        const double eps = arg_or(s, "eps", 0.01);
        const auto dec = cutoff(*snake, cutoff_threshold(ctx.n, ctx.b_n, ctx.alpha, p, eps));
        double max_abs = 0.0;
        for (const double v : dec.small_position) max_abs = std::max(max_abs, std::abs(v));
        return std::pow(ctx.b_n / n, 1.0 / p) * max_abs;
    }
    if (s.base == "noncentred_residual") {
        const auto* snake = need_snake();
        const double m = arg_or(s, "m", 1.0);
        const auto h = height(*ctx.tree);
        double worst = 0.0;
        for (std::size_t j = 0; j < snake->position.size(); ++j)
            worst = std::max(worst, std::abs(snake->position[j] - m * h[j]));
        return ctx.b_n / n * worst;
    }
    if (s.base == "progeny") return uniform_vertex_progeny(*ctx.tree, *ctx.rng);
    if (s.base == "inversion_fluct") {
        // (B_n / 12 n^3)^{1/2} (I - Lambda/2) with a uniform permutation
        std::vector<std::int32_t> perm(ctx.tree->vertex_count());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::int32_t>(i);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[ctx.rng->next_below(i)]);
        const double inv = static_cast<double>(inversions(*ctx.tree, perm));
        const double centred = inv - expected_inversions(*ctx.tree);
        return std::sqrt(ctx.b_n / (12.0 * n * n * n)) * centred;
    }
    throw std::invalid_argument("unknown statistic '" + stat + "'");
}

void ExperimentSpec::validate() const {
    if (replicas < 1) throw std::invalid_argument("experiment: replicas >= 1 required");
    if (n_grid.empty()) throw std::invalid_argument("experiment: n_grid must be nonempty");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("experiment: n_grid must be strictly increasing");
    if (stats.empty()) throw std::invalid_argument("experiment: stats must be nonempty");
}

void EnsembleAggregate::finalize() {
    std::sort(samples.begin(), samples.end());
    const double r = static_cast<double>(samples.size());
    double s1 = 0.0, s2 = 0.0;
    for (const auto& [idx, v] : samples) { (void)idx; s1 += v; s2 += v * v; }
    mean = s1 / r;
    variance = samples.size() > 1 ? (s2 - r * mean * mean) / (r - 1.0) : 0.0;
    variance = std::max(variance, 0.0);
    stderr_ = std::sqrt(variance / r);

    std::vector<double> sorted;
    sorted.reserve(samples.size());
    for (const auto& [idx, v] : samples) { (void)idx; sorted.push_back(v); }
    std::sort(sorted.begin(), sorted.end());
    const auto q = [&](double p) {
        const auto i = static_cast<std::size_t>(
            std::min<double>(std::ceil(p * r) - 1.0 < 0.0 ? 0.0 : std::ceil(p * r) - 1.0,
                             r - 1.0));
        return sorted[i];
    };
    quantiles = {{"q01", q(0.01)}, {"q25", q(0.25)}, {"q50", q(0.50)},
                 {"q75", q(0.75)}, {"q99", q(0.99)}};
}

void EnsembleResult::merge(const EnsembleResult& other) {
    for (const auto& [n, stats_map] : other.table) {
        for (const auto& [stat, agg] : stats_map) {
            auto& mine = table[n][stat];
            for (const auto& sample : agg.samples) {
                const bool present = std::any_of(
                    mine.samples.begin(), mine.samples.end(),
                    [&](const auto& s) { return s.first == sample.first; });
                if (!present) mine.samples.push_back(sample);
            }
            mine.finalize();
        }
    }
}

std::string EnsembleResult::to_json() const {
    json out;
    out["spec"] = {{"name", spec.name},
                   {"offspring", spec.offspring},
                   {"displacement", spec.displacement},
                   {"n_grid", spec.n_grid},
                   {"replicas", spec.replicas},
                   {"seed", spec.seed},
                   {"stats", spec.stats}};
    const OffspringLaw law = OffspringLaw::parse(spec.offspring);
    const Normalization norm = default_normalization(law);
    out["normalization_mode"] = norm.mode_name();

    json reports = json::array();
    for (const auto& [n, stats_map] : table) {
        for (const auto& [stat, agg] : stats_map) {
            json r;
            r["name"] = stat;
            r["value"] = agg.mean;
            r["stderr"] = agg.stderr_;
            r["n_samples"] = agg.samples.size();
            r["seed"] = spec.seed;
            r["params"] = {{"n", n},
                           {"offspring", spec.offspring},
                           {"displacement", spec.displacement},
                           {"B_n", norm(n)},
                           {"normalization", norm.mode_name()}};
            r["provenance"] = provenance_of(parse_stat(stat).base);
            r["quantiles"] = agg.quantiles;
            reports.push_back(r);
        }
    }
    out["results"] = reports;
    return out.dump(2);
}

std::string EnsembleResult::to_csv() const {
    std::ostringstream out;
    out << "n,stat,replica,value\n";
    for (const auto& [n, stats_map] : table)
        for (const auto& [stat, agg] : stats_map)
            for (const auto& [replica, value] : agg.samples) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", value);
                out << n << ',' << stat << ',' << replica << ',' << buf << '\n';
            }
    return out.str();
}

Rng replica_rng(std::uint64_t seed, std::int64_t n, std::uint64_t replica) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n));
    return Rng::stream(splitmix64(s), replica);
}

namespace {

std::string ckpt_path(const ExperimentSpec& spec, std::int64_t n, std::uint64_t replica) {
    return spec.out_dir + "/ckpt/n" + std::to_string(n) + "_r" + std::to_string(replica) + ".json";
}

bool load_checkpoint(const std::string& path, const std::vector<std::string>& stats,
                     std::map<std::string, double>& values) {
    std::ifstream in(path);
    if (!in) return false;
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        return false;   // partial write of a previous run; recompute
    }
    for (const auto& stat : stats) {
        if (!j.contains(stat)) return false;
        values[stat] = j[stat].get<double>();
    }
    return true;
}

} // namespace

EnsembleResult run_ensemble(const ExperimentSpec& spec) {
    spec.validate();
    const OffspringLaw law = OffspringLaw::parse(spec.offspring);
    const Normalization norm = default_normalization(law);
    const bool use_ckpt = !spec.out_dir.empty();
    if (use_ckpt) std::filesystem::create_directories(spec.out_dir + "/ckpt");

    EnsembleResult result;
    result.spec = spec;

    for (const std::int64_t n : spec.n_grid) {
        const double b_n = norm(n);
        DisplacementLaw disp = DisplacementLaw::uniform3();
        bool has_disp = !spec.displacement.empty();
        if (has_disp)
            disp = DisplacementLaw::parse(spec.displacement).materialize(n, b_n, law.alpha());

        for (std::uint64_t i = 0; i < spec.replicas; ++i) {
            std::map<std::string, double> values;
            if (use_ckpt && load_checkpoint(ckpt_path(spec, n, i), spec.stats, values)) {
                for (const auto& stat : spec.stats)
                    result.table[n][stat].samples.emplace_back(static_cast<std::uint32_t>(i),
                                                               values[stat]);
                continue;
            }

            Rng rng = replica_rng(spec.seed, n, i);
            try {
                const PlaneTree tree = spec.fixture_tree.empty()
                                           ? sample_tree(law, n, rng)
                                           : read_tree_csv(spec.fixture_tree);
                SpatialSnake snake;
                if (has_disp) snake = decorate(tree, disp, rng);

                ReplicaContext ctx;
                ctx.tree = &tree;
                ctx.snake = has_disp ? &snake : nullptr;
                ctx.n = tree.edge_count();
                ctx.b_n = b_n;
                ctx.alpha = law.alpha();
                ctx.rng = &rng;
                for (const auto& stat : spec.stats) values[stat] = eval_statistic(stat, ctx);
            } catch (const SamplingFailure& failure) {
                throw SamplingFailure("replica " + std::to_string(i) + " at n=" + std::to_string(n) +
                                          ": " + failure.what(),
                                      failure.n(), failure.attempts());
            }

            for (const auto& stat : spec.stats)
                result.table[n][stat].samples.emplace_back(static_cast<std::uint32_t>(i),
                                                           values[stat]);
            if (use_ckpt) {
                json j;
                for (const auto& [stat, value] : values) j[stat] = value;
                write_file_atomic(ckpt_path(spec, n, i), j.dump());
            }
        }
    }

    for (auto& [n, stats_map] : result.table)
        for (auto& [stat, agg] : stats_map) agg.finalize();

    if (use_ckpt) {
        write_file_atomic(spec.out_dir + "/result.json", result.to_json());
        write_file_atomic(spec.out_dir + "/result.csv", result.to_csv());
    }
    return result;
}

ExperimentSpec load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    in >> j;
    ExperimentSpec spec;
    if (j.contains("name")) spec.name = j["name"].get<std::string>();
    if (j.contains("offspring")) spec.offspring = j["offspring"].get<std::string>();
    if (j.contains("displacement")) spec.displacement = j["displacement"].get<std::string>();
    if (j.contains("n_grid")) spec.n_grid = j["n_grid"].get<std::vector<std::int64_t>>();
    if (j.contains("replicas")) spec.replicas = j["replicas"].get<std::size_t>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("stats")) spec.stats = j["stats"].get<std::vector<std::string>>();
    if (j.contains("out_dir")) spec.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("fixture_tree")) spec.fixture_tree = j["fixture_tree"].get<std::string>();
    spec.validate();
    return spec;
}

std::vector<std::string> builtin_experiment_names() {
    return {"thm1-boundary", "thm2-noncentred", "thm4-hairy", "thm5-flat",
            "lemma-holder", "cor-inversions"};
}

std::vector<ExperimentSpec> builtin_experiment(const std::string& name) {
    ExperimentSpec base;
    base.offspring = "geometric:0.5";
    base.seed = 20260809;

    if (name == "thm1-boundary") {
        ExperimentSpec light = base, heavy = base;
        light.name = "thm1-boundary/pareto10";
        light.displacement = "pareto:beta=10";
        light.n_grid = {1000, 100000};
        light.replicas = 200;
        light.stats = {"max_step_scaled:p=2"};
        heavy = light;
        heavy.name = "thm1-boundary/regime2";
        heavy.displacement = "regime:p=2,aplus=1,aminus=1";
        return {light, heavy};
    }
    if (name == "thm2-noncentred") {
        base.name = name;
        base.displacement = "shift:m=1,base=uniform3";
        base.n_grid = {1000, 10000, 100000};
        base.replicas = 100;
        base.stats = {"noncentred_residual:m=1"};
        return {base};
    }
    if (name == "thm4-hairy") {
        base.name = name;
        base.displacement = "regime:p=2,aplus=1,aminus=1";
        base.n_grid = {100000};
        base.replicas = 1000;
        base.stats = {"peak_count:eta=1,p=2"};
        return {base};
    }
    if (name == "thm5-flat") {
        base.name = name;
        base.displacement = "regime:p=0.6,aplus=1,aminus=1";
        base.n_grid = {100000};
        base.replicas = 400;
        base.stats = {"peak_count:eta=1,p=0.6", "small_jump_max_scaled:p=0.6"};
        return {base};
    }
    if (name == "lemma-holder") {
        base.name = name;
        base.n_grid = {1000, 100000};
        base.replicas = 200;
        base.stats = {"holder:gamma=0.4", "holder:gamma=0.6"};
        return {base};
    }
    if (name == "cor-inversions") {
        base.name = name;
        base.displacement = "uniform:-0.5,0.5";
        base.n_grid = {1000, 10000};
        base.replicas = 200;
        base.stats = {"lambda_scaled", "inversion_fluct"};
        return {base};
    }
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

} // namespace snakes
