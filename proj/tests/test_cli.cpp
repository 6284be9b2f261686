#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "snakes/cli.hpp"
#include "snakes/serialize.hpp"
#include "snakes/spatial_snake.hpp"
#include "snakes/svg_plot.hpp"
#include "snakes/tree_codec.hpp"

using namespace snakes;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct TempDir {
    std::string path;
    explicit TempDir(std::string p) : path(std::move(p)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("cli: sample emits a valid degree CSV") {
    TempDir dir("cli_sample_test");
    const std::string out = dir.path + "/t.csv";
    CHECK(cli_main({"sample", "--offspring", "geometric:0.5", "--n", "3", "--seed", "7",
                    "--out", out}) == 0);
    const auto tree = read_tree_csv(out);
    CHECK(tree.vertex_count() == 4);
    std::int64_t sum = 0;
    for (const auto d : tree.degrees()) sum += d;
    CHECK(sum == 3);

    // determinism: same seed, same bytes
    const std::string again = dir.path + "/t2.csv";
    CHECK(cli_main({"sample", "--offspring", "geometric:0.5", "--n", "3", "--seed", "7",
                    "--out", again}) == 0);
    CHECK(slurp(out) == slurp(again));
}

TEST_CASE("cli: usage errors exit with 2, sampling failure with 3") {
    CHECK(cli_main({"sample", "--n", "3", "--out", "x.csv"}) == 2);          // missing --seed
    CHECK(cli_main({"sample", "--offspring", "zipf:2", "--n", "3", "--seed", "1",
                    "--out", "x.csv"}) == 2);                                 // bad law
    CHECK(cli_main({"frobnicate"}) == 2);                                     // unknown command
    CHECK(cli_main({"sample", "--offspring", "binary", "--n", "3", "--seed", "1",
                    "--out", "never.csv"}) == 3);                             // impossible size
    CHECK(cli_main({"stats", "holder", "--in", "no_such_file.csv"}) == 2);
}

TEST_CASE("cli: encode matches the in-memory pipeline byte for byte") {
    TempDir dir("cli_encode_test");
    const std::string tree_csv = dir.path + "/fig.csv";
    const PlaneTree fig({4, 0, 0, 2, 1, 4, 0, 0, 0, 0, 0, 2, 3, 0, 0, 0, 0});
    write_tree_csv(fig, tree_csv);

    CHECK(cli_main({"encode", "--in", tree_csv, "--out", dir.path}) == 0);
    write_process_csv(lukasiewicz(fig), dir.path + "/W.expected.csv");
    write_process_csv(height(fig), dir.path + "/H.expected.csv");
    write_process_csv(contour(fig), dir.path + "/C.expected.csv");
    CHECK(slurp(dir.path + "/W.csv") == slurp(dir.path + "/W.expected.csv"));
    CHECK(slurp(dir.path + "/H.csv") == slurp(dir.path + "/H.expected.csv"));
    CHECK(slurp(dir.path + "/C.csv") == slurp(dir.path + "/C.expected.csv"));

    CHECK(cli_main({"encode", "--in", tree_csv, "--out", dir.path, "--format", "bin"}) == 0);
    CHECK(read_i64_dump(dir.path + "/W.bin") == lukasiewicz(fig));
}

TEST_CASE("cli: stats inversions on a chain with the identity permutation") {
    TempDir dir("cli_stats_test");
    const std::string tree_csv = dir.path + "/chain.csv";
    write_tree_csv(chain_tree(6), tree_csv);

    const std::string report_path = dir.path + "/report.json";
    CHECK(cli_main({"stats", "inversions", "--in", tree_csv, "--perm", "identity", "--out",
                    report_path}) == 0);
    const auto report = nlohmann::json::parse(slurp(report_path));
    CHECK(report["name"] == "inversions");
    CHECK(report["value"] == 0.0);
    CHECK(report["params"]["perm"] == "identity");

    CHECK(cli_main({"stats", "lambda", "--in", tree_csv, "--out", report_path}) == 0);
    CHECK(nlohmann::json::parse(slurp(report_path))["value"] == 15.0);
}

TEST_CASE("cli: snake round-trip equals the in-memory pipeline") {
    TempDir dir("cli_snake_test");
    CHECK(cli_main({"snake", "--offspring", "geometric:0.5", "--displacement", "uniform3",
                    "--n", "40", "--seed", "5", "--out", dir.path}) == 0);
    const auto tree = read_tree_csv(dir.path + "/tree.csv");
    CHECK(tree.edge_count() == 40);

    const auto rows = read_process_csv(dir.path + "/snake.csv");
    CHECK(rows.size() == 41);   // one row per vertex
}

TEST_CASE("cli: ensemble runs a builtin-sized config") {
    TempDir dir("cli_ensemble_test");
    const std::string config = dir.path + "/cfg.json";
    {
        std::ofstream out(config);
        out << R"({"name":"tiny","offspring":"geometric:0.5","n_grid":[30],"replicas":4,)"
            << R"("stats":["lambda"],"seed":1})";
    }
    CHECK(cli_main({"ensemble", "--config", config, "--seed", "1", "--out", dir.path}) == 0);
    CHECK(std::filesystem::exists(dir.path + "/tiny/result.json"));
    CHECK(cli_main({"ensemble", "--seed", "1"}) == 2);   // neither config nor experiment
}

TEST_CASE("svg: golden polyline for a small height process") {
    PlotSpec spec;
    spec.series.push_back({"H", {0.0, 1.0, 2.0, 3.0}, "#1f6fb2"});
    spec.width = 100;
    spec.height = 60;
    const std::string svg = render_polyline_plot(spec);
    const std::string golden =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"100\" height=\"60\" "
        "viewBox=\"0 0 100 60\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"10.000,50.000 "
        "36.667,36.667 63.333,23.333 90.000,10.000\"><title>H</title></polyline>\n"
        "</svg>\n";
    CHECK(svg == golden);

    CHECK_THROWS_AS(render_polyline_plot(PlotSpec{}), std::invalid_argument);
}

TEST_CASE("svg: spike marks equal the peak count") {
    const auto tree = chain_tree(21);
    std::vector<double> disp(21, 0.05);
    disp[4] = 30.0;
    disp[11] = -25.0;
    disp[17] = 40.0;
    const auto snake = decorate_with(tree, disp);
    const auto peaks = extract_peaks(snake, 2.0, 1.0);
    REQUIRE(peaks.size() == 3);

    PlotSpec spec;
    spec.series.push_back({"Hsp", snake.position, "#1f6fb2"});
    spec.peaks = peaks;
    const std::string svg = render_polyline_plot(spec);
    CHECK(count_peak_marks(svg) == peaks.size());
}

TEST_CASE("svg: radial tree render is deterministic and colour-ramped") {
    const auto tree = PlaneTree({2, 1, 0, 0});
    const auto h = height(tree);
    const std::vector<double> positions(h.begin(), h.end());
    const std::string a = render_tree_radial(tree, positions);
    const std::string b = render_tree_radial(tree, positions);
    CHECK(a == b);
    CHECK(a.find("<line") != std::string::npos);
    CHECK_THROWS_AS(render_tree_radial(tree, {0.0}), std::invalid_argument);
}

TEST_CASE("cli: plot process and tree") {
    TempDir dir("cli_plot_test");
    const std::string tree_csv = dir.path + "/t.csv";
    write_tree_csv(chain_tree(5), tree_csv);
    CHECK(cli_main({"encode", "--in", tree_csv, "--out", dir.path}) == 0);
    CHECK(cli_main({"plot", "--in", dir.path + "/H.csv", "--out", dir.path + "/H.svg"}) == 0);
    CHECK(slurp(dir.path + "/H.svg").rfind("<svg", 0) == 0);

    CHECK(cli_main({"plot", "--in", tree_csv, "--out", dir.path + "/tree.svg", "--kind",
                    "tree"}) == 0);
    CHECK(slurp(dir.path + "/tree.svg").rfind("<svg", 0) == 0);
}
