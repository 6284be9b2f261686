#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snakes/offspring.hpp"
#include "snakes/plane_tree.hpp"
#include "snakes/spatial_snake.hpp"

namespace snakes {

/**
 * Dyadic-window estimate of the Holder functional
 *   sup_{s != t} (B_n/n) |H(nt) - H(ns)| / |t-s|^gamma.
 *
 * Oscillations are taken over windows of length 2^k (all k) plus the full
 * window n, each evaluated by sliding min/max in O(n) per scale. The result
 * is a lower bound on the true sup within a factor 2^gamma (dyadic
 * chaining), which preserves the bounded-vs-divergent dichotomy in n.
 *
 * `window_grid` overrides the default scale set when non-empty.
 */
double holder_statistic(const std::vector<std::int32_t>& h, double b_n, double gamma,
                        const std::vector<std::int64_t>& window_grid = {});

/// max over windows of length `w` (indices i..i+w) of max-min of `h`.
std::int64_t max_oscillation(const std::vector<std::int32_t>& h, std::int64_t w);

/// Number of inversions of the labelled tree: pairs (ancestor u_i, descendant
/// u_j) with perm[i] > perm[j]. O(n log n) via an order-statistics accumulator
/// maintained along the depth-first ancestor stack.
std::int64_t inversions(const PlaneTree& tree, const std::vector<std::int32_t>& perm);

/// E[I(T) | T] over a uniform permutation: Lambda(T)/2, exact (half-integer).
/// Cross-checks Lambda against the ancestor-pair count before returning.
double expected_inversions(const PlaneTree& tree);

/**
 * Monte Carlo check of the snake/inversion coupling on one tree, with
 * displacements uniform on (-1/2, 1/2):
 *  - Var(J | T), J = sum of positions, against the exact covariance sum
 *    Var(Y) * sum_{v != root} subtree_size(v)^2;
 *  - the step process R_hat (deeper-endpoint value of the spatial contour)
 *    satisfies |R_hat - C^sp| <= 1/2 and (1/2) int R_hat = J exactly;
 *  - |J - (I - Lambda/2)| <= 2n where the permutation is the rank order of
 *    1/2 - Y (plus an independent uniform for the root).
 */
struct CouplingCheckReport {
    std::size_t replicates = 0;
    double exact_variance = 0.0;
    double sample_variance = 0.0;
    double variance_z = 0.0;
    double max_interp_deviation = 0.0;   // sup_t |R_hat - C^sp|, must be <= 1/2
    double max_integral_residual = 0.0;  // max |(1/2) int R_hat - J|, must be 0
    double max_coupling_gap = 0.0;       // max |J - (I - Lambda/2)|
    double coupling_bound = 0.0;         // 2n
    bool coupling_bound_ok = false;
};

CouplingCheckReport inversion_coupling_check(const PlaneTree& tree, std::size_t replicates,
                                             std::uint64_t seed);

/// A finite set of peak points in [0,1] x R, at most one value per abscissa.
struct PeakPoint {
    double x = 0.0;
    double value = 0.0;
    std::size_t vertex = 0;
};
struct PeakSet {
    std::vector<PeakPoint> points;
    std::size_t size() const { return points.size(); }
};

enum class PeakTimeBase { lex, contour_first_visit };

/// Vertices with |Y_u| > eta * scale, reported as (time/n, Y_u/scale).
PeakSet extract_peaks(const SpatialSnake& snake, double scale, double eta,
                      PeakTimeBase base = PeakTimeBase::lex);

/// Compact subset of [0,1] x R: polylines plus isolated points.
struct CompactSet {
    std::vector<std::vector<std::array<double, 2>>> polylines;
    std::vector<std::array<double, 2>> points;
    bool empty() const;
};

/// Graph of f (sampled on the uniform grid i/(M-1) over [0,1]) together with
/// a vertical segment of length |y| at (x, f(x)) for every peak, the peak
/// abscissa snapped to the nearest grid point.
CompactSet graph_with_peaks(const std::vector<double>& f, const PeakSet& peaks);

/// Hausdorff distance between the epsilon-discretizations of two compact
/// sets; within `resolution` of the true value. Throws on empty input.
double hausdorff_distance(const CompactSet& a, const CompactSet& b, double resolution = 1e-3);

/// Times t with S(t) = max_{i <= t} S(i) (weak records), O(len).
std::vector<std::int64_t> weak_record_times(const std::vector<std::int64_t>& s);

/// First weak ascending ladder epoch tau_1 = inf{k >= 1 : S(k) >= 0} of the
/// unconditioned walk with steps xi - 1; censored at `cap` (returns cap).
std::int64_t sample_record_time(const OffspringLaw& law, std::int64_t cap, Rng& rng);

/**
 * Scan of the first-child fraction over all root-to-vertex path suffixes of
 * length ceil(C ln n); flags a violation when some window exceeds
 * 1 - mu0/2. Longer ancestor segments contain such a window, so this is the
 * O(n log n) surrogate for the all-pairs event.
 */
struct BranchCompositionReport {
    std::int64_t window = 0;
    std::int64_t windows_checked = 0;
    double max_first_child_fraction = 0.0;
    double threshold = 0.0;
    bool violated = false;
};

BranchCompositionReport branch_composition(const PlaneTree& tree, double c_const, double mu0);

/// Subtree mass D(v)/n of a uniformly sampled vertex; returns 1 for n = 0.
double uniform_vertex_progeny(const PlaneTree& tree, Rng& rng);

} // namespace snakes
