#include "snakes/cli.hpp"

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "snakes/ensemble.hpp"
#include "snakes/gof.hpp"
#include "snakes/serialize.hpp"
#include "snakes/snake_stats.hpp"
#include "snakes/svg_plot.hpp"
#include "snakes/tree_codec.hpp"
#include "snakes/tree_sampler.hpp"

namespace snakes {

namespace {

using nlohmann::json;

struct Options {
    std::string offspring = "geometric:0.5";
    std::string displacement;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::size_t replicas = 0;
    double gamma = 0.4;
    double eta = 1.0;
    double p = 2.0;
    std::string in;
    std::string out;
    std::string format = "csv";
    std::string plot_format = "svg";
    std::string config;
    std::string experiment;
    std::string perm = "identity";
    std::string kind = "process";
    std::string stat_name;
    double cconst = 0.0;
    double bn_override = 0.0;
};

void emit_report(const Options& opt, const std::string& name, double value, double stderr_,
                 std::size_t n_samples, const json& params) {
    json report;
    report["name"] = name;
    report["value"] = value;
    report["stderr"] = stderr_;
    report["n_samples"] = n_samples;
    report["seed"] = opt.seed;
    report["params"] = params;
    const std::string text = report.dump(2) + "\n";
    if (opt.out.empty()) std::cout << text;
    else write_file_atomic(opt.out, text);
}

int run_sample(const Options& opt) {
    const OffspringLaw law = OffspringLaw::parse(opt.offspring);
    Rng rng = Rng::stream(opt.seed, 0);
    const PlaneTree tree = sample_tree(law, opt.n, rng);
    write_tree_csv(tree, opt.out);
    return 0;
}

int run_encode(const Options& opt) {
    const PlaneTree tree = read_tree_csv(opt.in);
    std::filesystem::create_directories(opt.out);
    const auto w = lukasiewicz(tree);
    const auto h = height(tree);
    const auto c = contour(tree);
    if (opt.format == "bin") {
        write_i64_dump(w, opt.out + "/W.bin");
        write_i64_dump(std::vector<std::int64_t>(h.begin(), h.end()), opt.out + "/H.bin");
        write_i64_dump(std::vector<std::int64_t>(c.begin(), c.end()), opt.out + "/C.bin");
    } else {
        write_process_csv(w, opt.out + "/W.csv");
        write_process_csv(h, opt.out + "/H.csv");
        write_process_csv(c, opt.out + "/C.csv");
    }
    return 0;
}

int run_snake(const Options& opt) {
    const OffspringLaw law = OffspringLaw::parse(opt.offspring);
    const Normalization norm = default_normalization(law);
    Rng rng = Rng::stream(opt.seed, 0);
    const PlaneTree tree = sample_tree(law, opt.n, rng);
    const DisplacementLaw disp =
        DisplacementLaw::parse(opt.displacement).materialize(opt.n, norm(opt.n), law.alpha());
    const SpatialSnake snake = decorate(tree, disp, rng);
    std::filesystem::create_directories(opt.out);
    write_tree_csv(tree, opt.out + "/tree.csv");
    write_snake_csv(snake, opt.out + "/snake.csv");
    write_snake_contour_csv(snake, opt.out + "/snake_contour.csv");
    return 0;
}

int run_stats(const Options& opt) {
    const PlaneTree tree = read_tree_csv(opt.in);
    const std::int64_t n = tree.edge_count();
    json params = {{"in", opt.in}, {"n", n}};

    if (opt.stat_name == "lambda") {
        emit_report(opt, "lambda", static_cast<double>(total_path_length(tree)), 0.0, 1, params);
        return 0;
    }
    if (opt.stat_name == "expected-inversions") {
        emit_report(opt, "expected-inversions", expected_inversions(tree), 0.0, 1, params);
        return 0;
    }
    if (opt.stat_name == "inversions") {
        std::vector<std::int32_t> perm(tree.vertex_count());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::int32_t>(i);
        if (opt.perm == "reversed") {
            std::reverse(perm.begin(), perm.end());
        } else if (opt.perm == "random") {
            Rng rng = Rng::stream(opt.seed, 0);
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[rng.next_below(i)]);
        } else if (opt.perm != "identity") {
            throw std::invalid_argument("--perm must be identity|reversed|random");
        }
        params["perm"] = opt.perm;
        emit_report(opt, "inversions", static_cast<double>(inversions(tree, perm)), 0.0, 1, params);
        return 0;
    }
    if (opt.stat_name == "holder") {
        const OffspringLaw law = OffspringLaw::parse(opt.offspring);
        const double b_n = opt.bn_override > 0.0 ? opt.bn_override : default_normalization(law)(n);
        params["gamma"] = opt.gamma;
        params["B_n"] = b_n;
        emit_report(opt, "holder", holder_statistic(height(tree), b_n, opt.gamma), 0.0, 1, params);
        return 0;
    }
    if (opt.stat_name == "peaks") {
        const OffspringLaw law = OffspringLaw::parse(opt.offspring);
        const double b_n = opt.bn_override > 0.0 ? opt.bn_override : default_normalization(law)(n);
        const DisplacementLaw disp =
            DisplacementLaw::parse(opt.displacement).materialize(n, b_n, law.alpha());
        Rng rng = Rng::stream(opt.seed, 0);
        const SpatialSnake snake = decorate(tree, disp, rng);
        const double scale = std::pow(static_cast<double>(n) / b_n, 1.0 / opt.p);
        const PeakSet peaks = extract_peaks(snake, scale, opt.eta);
        params["eta"] = opt.eta;
        params["p"] = opt.p;
        params["displacement"] = opt.displacement;
        emit_report(opt, "peak-count", static_cast<double>(peaks.size()), 0.0, 1, params);
        return 0;
    }
    if (opt.stat_name == "records") {
        const auto w = lukasiewicz(tree);
        const auto times = weak_record_times(w);
        emit_report(opt, "weak-record-count", static_cast<double>(times.size()), 0.0, 1, params);
        return 0;
    }
    if (opt.stat_name == "branch") {
        const OffspringLaw law = OffspringLaw::parse(opt.offspring);
        const double c_const = opt.cconst > 0.0 ? opt.cconst : 10.0 / (law.mu0() * law.mu0());
        const auto report = branch_composition(tree, c_const, law.mu0());
        params["C"] = c_const;
        params["window"] = report.window;
        params["violated"] = report.violated;
        emit_report(opt, "branch-max-first-child-fraction", report.max_first_child_fraction, 0.0,
                    static_cast<std::size_t>(report.windows_checked), params);
        return 0;
    }
    if (opt.stat_name == "progeny") {
        Rng rng = Rng::stream(opt.seed, 0);
        emit_report(opt, "progeny", uniform_vertex_progeny(tree, rng), 0.0, 1, params);
        return 0;
    }
    throw std::invalid_argument("unknown statistic '" + opt.stat_name +
                                "' (lambda|expected-inversions|inversions|holder|peaks|records|"
                                "branch|progeny)");
}

int run_ensemble_cmd(const Options& opt) {
    std::vector<ExperimentSpec> specs;
    if (!opt.experiment.empty()) {
        specs = builtin_experiment(opt.experiment);
    } else if (!opt.config.empty()) {
        specs = {load_experiment_config(opt.config)};
    } else {
        throw std::invalid_argument("ensemble: pass --config <file> or --experiment <name>");
    }
    for (auto& spec : specs) {
        spec.seed = opt.seed;
        if (opt.replicas > 0) spec.replicas = opt.replicas;
        if (!opt.out.empty()) {
            std::string sub = spec.name;
            std::replace(sub.begin(), sub.end(), '/', '_');
            spec.out_dir = opt.out + "/" + sub;
        }
        const EnsembleResult result = run_ensemble(spec);
        if (spec.out_dir.empty()) std::cout << result.to_json() << "\n";
        else std::cout << spec.name << ": wrote " << spec.out_dir << "/result.json\n";
    }
    return 0;
}

int run_plot(const Options& opt) {
    if (opt.kind == "tree") {
        const PlaneTree tree = read_tree_csv(opt.in);
        std::vector<double> positions;
        if (!opt.displacement.empty()) {
            const OffspringLaw law = OffspringLaw::parse(opt.offspring);
            const double b_n = default_normalization(law)(std::max<std::int64_t>(tree.edge_count(), 1));
            const DisplacementLaw disp = DisplacementLaw::parse(opt.displacement)
                                             .materialize(tree.edge_count(), b_n, law.alpha());
            Rng rng = Rng::stream(opt.seed, 0);
            positions = decorate(tree, disp, rng).position;
        } else {
            const auto h = height(tree);
            positions.assign(h.begin(), h.end());
        }
        write_file_atomic(opt.out, render_tree_radial(tree, positions));
        return 0;
    }
    PlotSpec spec;
    PlotSeries series;
    series.name = std::filesystem::path(opt.in).stem().string();
    series.values = read_process_csv(opt.in);
    spec.series.push_back(std::move(series));
    emit_plot(spec, opt.out, opt.plot_format);
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"size-conditioned random tree and discrete snake toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto* sample = app.add_subcommand("sample", "sample a conditioned tree to CSV");
    sample->add_option("--offspring", opt.offspring, "offspring law spec");
    sample->add_option("--n", opt.n, "number of edges (tree has n+1 vertices)")->required();
    sample->add_option("--seed", opt.seed, "master seed")->required();
    sample->add_option("--out", opt.out, "output tree CSV")->required();

    auto* encode = app.add_subcommand("encode", "emit W/H/C encodings of a tree");
    encode->add_option("--in", opt.in, "input tree CSV")->required();
    encode->add_option("--out", opt.out, "output directory")->required();
    encode->add_option("--format", opt.format, "csv|bin");

    auto* snake = app.add_subcommand("snake", "sample a tree and decorate it");
    snake->add_option("--offspring", opt.offspring, "offspring law spec");
    snake->add_option("--displacement", opt.displacement, "displacement law spec")->required();
    snake->add_option("--n", opt.n, "number of edges")->required();
    snake->add_option("--seed", opt.seed, "master seed")->required();
    snake->add_option("--out", opt.out, "output directory")->required();

    auto* stats = app.add_subcommand("stats", "compute one statistic of a stored tree");
    stats->add_option("name", opt.stat_name, "statistic name")->required();
    stats->add_option("--in", opt.in, "input tree CSV")->required();
    stats->add_option("--perm", opt.perm, "identity|reversed|random");
    stats->add_option("--seed", opt.seed, "seed for randomized statistics");
    stats->add_option("--gamma", opt.gamma, "Holder exponent");
    stats->add_option("--eta", opt.eta, "peak threshold");
    stats->add_option("--p", opt.p, "regime exponent");
    stats->add_option("--offspring", opt.offspring, "offspring law (for B_n)");
    stats->add_option("--displacement", opt.displacement, "displacement law spec");
    stats->add_option("--bn", opt.bn_override, "explicit B_n override");
    stats->add_option("--cconst", opt.cconst, "branch-composition constant C");
    stats->add_option("--out", opt.out, "write the JSON report here instead of stdout");

    auto* ens = app.add_subcommand("ensemble", "run a Monte Carlo ensemble");
    ens->add_option("--config", opt.config, "experiment config JSON");
    ens->add_option("--experiment", opt.experiment, "built-in experiment name");
    ens->add_option("--seed", opt.seed, "master seed")->required();
    ens->add_option("--replicas", opt.replicas, "override replica count");
    ens->add_option("--out", opt.out, "output directory");

    auto* plot = app.add_subcommand("plot", "render a process or tree as SVG");
    plot->add_option("--in", opt.in, "input CSV (process or tree)")->required();
    plot->add_option("--out", opt.out, "output file")->required();
    plot->add_option("--kind", opt.kind, "process|tree");
    plot->add_option("--format", opt.plot_format, "svg|csv");
    plot->add_option("--offspring", opt.offspring, "offspring law (tree kind)");
    plot->add_option("--displacement", opt.displacement, "decorate before rendering (tree kind)");
    plot->add_option("--seed", opt.seed, "seed for decoration");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);   // --help
        app.exit(e);
        return 2;
    }

    try {
        if (sample->parsed()) return run_sample(opt);
        if (encode->parsed()) return run_encode(opt);
        if (snake->parsed()) return run_snake(opt);
        if (stats->parsed()) return run_stats(opt);
        if (ens->parsed()) return run_ensemble_cmd(opt);
        if (plot->parsed()) return run_plot(opt);
    } catch (const SamplingFailure& e) {
        std::cerr << "sampling failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace snakes
