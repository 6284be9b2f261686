#pragma once

#include <cstdint>
#include <vector>

#include "snakes/displacement.hpp"
#include "snakes/plane_tree.hpp"
#include "snakes/rng.hpp"

namespace snakes {

/**
 * SpatialSnake — a tree decorated with per-vertex displacements Y (root
 * carries Y = 0) and positions S_u = S_parent + Y_u, S_root = 0, together
 * with the spatial height process (positions in lex order) and the spatial
 * contour process (positions along the contour).
 */
struct SpatialSnake {
    const PlaneTree* tree = nullptr;      // not owned
    std::vector<double> displacement;     // Y, lex order, [0] = 0
    std::vector<double> position;         // S, lex order; == spatial height process
    std::vector<double> contour_position; // spatial contour process, length 2n+1

    std::size_t vertex_count() const { return position.size(); }
    const std::vector<double>& spatial_height() const { return position; }
};

/// i.i.d. decoration of every non-root vertex; deterministic given (tree, rng state).
SpatialSnake decorate(const PlaneTree& tree, const DisplacementLaw& law, Rng& rng);

/// Decoration with explicit displacements (displacement[0] ignored, forced 0).
SpatialSnake decorate_with(const PlaneTree& tree, std::vector<double> displacement);

/**
 * CutoffDecomposition — split of a snake at threshold b_n into the
 * small-jump process (|Y| <= b_n) and the large-jump process (|Y| > b_n).
 * The pointwise identity small + large = original holds exactly: both parts
 * are path sums over the same dyadic-grid displacements.
 */
struct CutoffDecomposition {
    double threshold = 0.0;
    std::vector<double> small_position;   // H^sp' in lex order
    std::vector<double> large_position;   // H^sp'' in lex order
    std::size_t large_count = 0;          // vertices with |Y| > b_n
    /// true iff some vertex with a large jump has a strict ancestor with a
    /// large jump (two large displacements on one branch)
    bool nested_large_jumps = false;
};

CutoffDecomposition cutoff(const SpatialSnake& snake, double threshold);

/// The threshold b_n = (n^2/B_n)^{(alpha-1)/(2 p alpha) + eps}. p = 2 is the
/// square-root regime used by the convergence criterion; smaller p matches
/// the heavier-tail regimes.
double cutoff_threshold(std::int64_t n, double b_n, double alpha, double p = 2.0,
                        double eps = 0.01);

/**
 * Monte Carlo check of the conditional moment identities on a fixed tree:
 * E[Hsp(j) | T] = m H(j) and Var[Hsp(j) | T] = Var(Y) H(j).
 */
struct MomentCheckReport {
    struct Probe {
        std::size_t index = 0;
        std::int32_t depth = 0;
        double mean = 0.0, mean_z = 0.0;            // sample mean vs m*H(j)
        double second_scaled = 0.0, second_se = 0.0; // mean of (Hsp-mH)^2/(Var(Y) H)
        double var_z = 0.0;
    };
    std::vector<Probe> probes;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    bool all_within(double z_bound) const;
};

MomentCheckReport conditional_moment_check(const PlaneTree& tree, const DisplacementLaw& law,
                                           const std::vector<std::size_t>& probe_indices,
                                           std::size_t replicates, std::uint64_t seed);

} // namespace snakes
