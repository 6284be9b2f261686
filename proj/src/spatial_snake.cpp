#include "snakes/spatial_snake.hpp"

#include <cmath>
#include <stdexcept>

#include "snakes/tree_codec.hpp"

namespace snakes {

namespace {

void fill_positions(SpatialSnake& snake) {
    const auto& par = snake.tree->parents();
    snake.position.resize(snake.displacement.size());
    snake.position[0] = 0.0;
    for (std::size_t j = 1; j < snake.position.size(); ++j)
        snake.position[j] = snake.position[par[j]] + snake.displacement[j];

    const auto seq = contour_vertices(*snake.tree);
    snake.contour_position.resize(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t)
        snake.contour_position[t] = snake.position[seq[t]];
}

} // namespace

SpatialSnake decorate(const PlaneTree& tree, const DisplacementLaw& law, Rng& rng) {
    if (law.needs_calibration())
        throw std::invalid_argument("decorate: materialize the regime law at (n, B_n) first");
    SpatialSnake snake;
    snake.tree = &tree;
    snake.displacement.resize(tree.vertex_count());
    snake.displacement[0] = 0.0;
    for (std::size_t j = 1; j < snake.displacement.size(); ++j)
        snake.displacement[j] = law.sample(rng);
    fill_positions(snake);
    return snake;
}

SpatialSnake decorate_with(const PlaneTree& tree, std::vector<double> displacement) {
    if (displacement.size() != tree.vertex_count())
        throw std::invalid_argument("decorate_with: one displacement per vertex expected");
    SpatialSnake snake;
    snake.tree = &tree;
    snake.displacement = std::move(displacement);
    snake.displacement[0] = 0.0;
    fill_positions(snake);
    return snake;
}

CutoffDecomposition cutoff(const SpatialSnake& snake, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("cutoff: threshold must be > 0");
    const auto& par = snake.tree->parents();
    const std::size_t n1 = snake.displacement.size();

    CutoffDecomposition dec;
    dec.threshold = threshold;
    dec.small_position.resize(n1);
    dec.large_position.resize(n1);
    dec.small_position[0] = dec.large_position[0] = 0.0;
    // large jumps currently on the root path, per vertex (counts its own)
    std::vector<std::int32_t> large_on_path(n1, 0);
    for (std::size_t j = 1; j < n1; ++j) {
        const double y = snake.displacement[j];
        const bool large = std::abs(y) > threshold;
        dec.small_position[j] = dec.small_position[par[j]] + (large ? 0.0 : y);
        dec.large_position[j] = dec.large_position[par[j]] + (large ? y : 0.0);
        large_on_path[j] = large_on_path[par[j]] + (large ? 1 : 0);
        if (large) {
            ++dec.large_count;
            if (large_on_path[par[j]] > 0) dec.nested_large_jumps = true;
        }
    }
    return dec;
}

double cutoff_threshold(std::int64_t n, double b_n, double alpha, double p, double eps) {
    const double exponent = (alpha - 1.0) / (2.0 * p * alpha) + eps;
    return std::pow(static_cast<double>(n) * static_cast<double>(n) / b_n, exponent);
}

bool MomentCheckReport::all_within(double z_bound) const {
    for (const auto& p : probes)
        if (std::abs(p.mean_z) > z_bound || std::abs(p.var_z) > z_bound) return false;
    return true;
}

MomentCheckReport conditional_moment_check(const PlaneTree& tree, const DisplacementLaw& law,
                                           const std::vector<std::size_t>& probe_indices,
                                           std::size_t replicates, std::uint64_t seed) {
    if (replicates < 2) throw std::invalid_argument("moment check: need >= 2 replicates");
    const auto h = height(tree);
    const double m = law.mean();
    const double var_y = law.variance();

    MomentCheckReport report;
    report.replicates = replicates;
    report.seed = seed;
    for (const std::size_t j : probe_indices) {
        if (j >= tree.vertex_count()) throw std::invalid_argument("moment check: probe out of range");
        if (h[j] == 0) throw std::invalid_argument("moment check: probe must have depth >= 1");
    }

    // accumulate sums of Hsp(j), (Hsp-mH)^2 and (.)^4 per probe
    const std::size_t np = probe_indices.size();
    std::vector<double> s1(np, 0.0), s2(np, 0.0), s4(np, 0.0);
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng = Rng::stream(seed, r);
        const SpatialSnake snake = decorate(tree, law, rng);
        for (std::size_t i = 0; i < np; ++i) {
            const std::size_t j = probe_indices[i];
            const double value = snake.position[j];
            const double centered = value - m * h[j];
            s1[i] += value;
            s2[i] += centered * centered;
            s4[i] += centered * centered * centered * centered;
        }
    }

    const double r = static_cast<double>(replicates);
    for (std::size_t i = 0; i < np; ++i) {
        MomentCheckReport::Probe probe;
        probe.index = probe_indices[i];
        probe.depth = h[probe.index];
        const double target_var = var_y * probe.depth;

        probe.mean = s1[i] / r;
        const double mean_se = std::sqrt(target_var / r);
        probe.mean_z = (probe.mean - m * probe.depth) / mean_se;

        const double m2 = s2[i] / r;          // E[(Hsp - mH)^2]
        const double m4 = s4[i] / r;
        probe.second_scaled = m2 / target_var;
        const double var_of_m2 = std::max(0.0, m4 - m2 * m2) / r;
        probe.second_se = std::sqrt(var_of_m2) / target_var;
        probe.var_z = (probe.second_scaled - 1.0) / std::max(probe.second_se, 1e-300);
        report.probes.push_back(probe);
    }
    return report;
}

} // namespace snakes
