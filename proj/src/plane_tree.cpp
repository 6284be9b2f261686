#include "snakes/plane_tree.hpp"

#include <stdexcept>

namespace snakes {

PlaneTree::PlaneTree(std::vector<std::int32_t> degrees)
    : degrees_(std::move(degrees)), derived_(std::make_unique<Derived>()) {
    if (degrees_.empty()) throw std::invalid_argument("plane tree: empty degree sequence");
    std::int64_t walk = 0;
    for (std::size_t j = 0; j < degrees_.size(); ++j) {
        if (degrees_[j] < 0) throw std::invalid_argument("plane tree: negative degree");
        walk += degrees_[j] - 1;
        if (j + 1 < degrees_.size() && walk < 0)
            throw std::invalid_argument("plane tree: degree prefix closes early");
    }
    if (walk != -1) throw std::invalid_argument("plane tree: degrees do not sum to n");
}

const std::vector<std::int32_t>& PlaneTree::parents() const {
    std::call_once(derived_->parents_once, [this] {
        auto& par = derived_->parents;
        par.assign(degrees_.size(), -1);
        // stack of (vertex, children still to attach)
        std::vector<std::pair<std::int32_t, std::int32_t>> stack;
        for (std::size_t j = 0; j < degrees_.size(); ++j) {
            if (j > 0) {
                par[j] = stack.back().first;
                if (--stack.back().second == 0) stack.pop_back();
            }
            if (degrees_[j] > 0) stack.emplace_back(static_cast<std::int32_t>(j), degrees_[j]);
        }
    });
    return derived_->parents;
}

const std::vector<std::int32_t>& PlaneTree::subtree_sizes() const {
    std::call_once(derived_->sizes_once, [this] {
        const auto& par = parents();
        auto& sz = derived_->sizes;
        sz.assign(degrees_.size(), 1);
        for (std::size_t j = degrees_.size(); j-- > 1;) sz[par[j]] += sz[j];
    });
    return derived_->sizes;
}

bool PlaneTree::is_first_child(std::size_t v) const {
    if (v == 0) return false;
    return parents()[v] == static_cast<std::int32_t>(v) - 1;
}

PlaneTree singleton_tree() { return PlaneTree({0}); }

PlaneTree chain_tree(std::size_t vertices) {
    if (vertices == 0) throw std::invalid_argument("chain: need at least one vertex");
    std::vector<std::int32_t> d(vertices, 1);
    d.back() = 0;
    return PlaneTree(std::move(d));
}

PlaneTree star_tree(std::size_t leaves) {
    std::vector<std::int32_t> d(leaves + 1, 0);
    d[0] = static_cast<std::int32_t>(leaves);
    return PlaneTree(std::move(d));
}

} // namespace snakes
