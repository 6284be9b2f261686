#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace snakes {

/**
 * PlaneTree — a plane tree stored as its depth-first degree sequence.
 *
 * The degree sequence coincides with the Lukasiewicz increments + 1, which
 * keeps every encoder a single linear scan. Parent and subtree-size arrays
 * are derived lazily (thread-safe) since they cost 2x the tree's footprint
 * at n = 1e7.
 *
 * Validity: sum(d_i - 1) = -1 and every strict prefix sum is >= 0.
 */
class PlaneTree {
public:
    /// Takes ownership of a depth-first degree sequence; validates it.
    explicit PlaneTree(std::vector<std::int32_t> degrees);

    PlaneTree(PlaneTree&&) noexcept = default;
    PlaneTree& operator=(PlaneTree&&) noexcept = default;
    PlaneTree(const PlaneTree& other) : PlaneTree(other.degrees_) {}
    PlaneTree& operator=(const PlaneTree& other) {
        if (this != &other) *this = PlaneTree(other.degrees_);
        return *this;
    }

    std::size_t vertex_count() const { return degrees_.size(); }
    /// n = number of edges; the tree has n+1 vertices.
    std::int64_t edge_count() const { return static_cast<std::int64_t>(degrees_.size()) - 1; }
    std::int32_t degree(std::size_t v) const { return degrees_[v]; }
    const std::vector<std::int32_t>& degrees() const { return degrees_; }

    /// parent[v] in lexicographic indexing; parent[0] = -1 for the root.
    const std::vector<std::int32_t>& parents() const;
    /// subtree_size[v] counts v and all its descendants; subtree_size[0] = n+1.
    const std::vector<std::int32_t>& subtree_sizes() const;

    /// True for v != root whose index is parent's index + 1 (first child).
    bool is_first_child(std::size_t v) const;

    bool operator==(const PlaneTree& other) const { return degrees_ == other.degrees_; }

private:
    struct Derived {
        std::once_flag parents_once, sizes_once;
        std::vector<std::int32_t> parents;
        std::vector<std::int32_t> sizes;
    };
    std::vector<std::int32_t> degrees_;
    std::unique_ptr<Derived> derived_;
};

/// Single-vertex tree (n = 0).
PlaneTree singleton_tree();
/// Path of `vertices` vertices.
PlaneTree chain_tree(std::size_t vertices);
/// Root with `leaves` leaf children.
PlaneTree star_tree(std::size_t leaves);

} // namespace snakes
