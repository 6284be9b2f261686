#pragma once

#include <cstdint>
#include <vector>

#include "snakes/plane_tree.hpp"

namespace snakes {

/**
 * The three path encodings of a plane tree with n+1 vertices:
 *   W — Lukasiewicz path, length n+2, W(0)=0, ..., W(n+1) = -1;
 *   H — height process, length n+1, depth of the j-th vertex in lex order;
 *   C — contour process, length 2n+1, depth along the clockwise contour.
 */
std::vector<std::int64_t> lukasiewicz(const PlaneTree& tree);
std::vector<std::int32_t> height(const PlaneTree& tree);
std::vector<std::int32_t> contour(const PlaneTree& tree);

/// Vertex id visited at each contour step (length 2n+1); contour() is its depth image.
std::vector<std::int32_t> contour_vertices(const PlaneTree& tree);

/// Height recovered from weak records of W:
/// H(j) = #{k < j : W(k) <= min over [k+1, j] of W}. O(n^2); test oracle only.
std::vector<std::int32_t> height_via_records(const std::vector<std::int64_t>& w);

/// Inverse of lukasiewicz: degrees are the increments + 1.
PlaneTree decode(const std::vector<std::int64_t>& w);

/// Children order reversed at every vertex; an involution.
PlaneTree mirror(const PlaneTree& tree);

/// Total path length Lambda = sum of the depths of all vertices.
std::int64_t total_path_length(const PlaneTree& tree);

/// Lambda recomputed from the contour process through the exact integer
/// identity 4*Lambda = 2n + 2*sum_{0<i<2n} C(i) + C(0) + C(2n)
/// (the trapezoid value of n/2 + (1/2) * integral of C). Must equal
/// total_path_length exactly.
std::int64_t path_length_from_contour(const std::vector<std::int32_t>& c);

/// Number of (ancestor, descendant) pairs = sum_v (subtree_size(v) - 1);
/// equals Lambda by counting each pair at the ancestor.
std::int64_t ancestor_pair_count(const PlaneTree& tree);

} // namespace snakes
