#include "snakes/tree_codec.hpp"

#include <stdexcept>

namespace snakes {

std::vector<std::int64_t> lukasiewicz(const PlaneTree& tree) {
    const auto& deg = tree.degrees();
    std::vector<std::int64_t> w(deg.size() + 1);
    w[0] = 0;
    for (std::size_t j = 0; j < deg.size(); ++j) w[j + 1] = w[j] + deg[j] - 1;
    return w;
}

std::vector<std::int32_t> height(const PlaneTree& tree) {
    const auto& par = tree.parents();
    std::vector<std::int32_t> h(par.size());
    h[0] = 0;
    for (std::size_t j = 1; j < par.size(); ++j) h[j] = h[par[j]] + 1;
    return h;
}

std::vector<std::int32_t> contour_vertices(const PlaneTree& tree) {
    const auto& deg = tree.degrees();
    const auto& sz = tree.subtree_sizes();
    const std::size_t n1 = deg.size();
    std::vector<std::int32_t> seq;
    seq.reserve(2 * n1 - 1);

    // frame: vertex, position of its next unvisited child, children left
    struct Frame { std::int32_t v; std::int32_t next_child; std::int32_t remaining; };
    std::vector<Frame> stack;
    stack.push_back({0, 1, deg[0]});
    seq.push_back(0);
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.remaining > 0) {
            const std::int32_t child = top.next_child;
            top.next_child += sz[child];
            --top.remaining;
            seq.push_back(child);
            stack.push_back({child, child + 1, deg[child]});
        } else {
            stack.pop_back();
            if (!stack.empty()) seq.push_back(stack.back().v);
        }
    }
    return seq;
}

std::vector<std::int32_t> contour(const PlaneTree& tree) {
    const auto h = height(tree);
    const auto seq = contour_vertices(tree);
    std::vector<std::int32_t> c(seq.size());
    for (std::size_t j = 0; j < seq.size(); ++j) c[j] = h[seq[j]];
    return c;
}

std::vector<std::int32_t> height_via_records(const std::vector<std::int64_t>& w) {
    if (w.size() < 2) throw std::invalid_argument("height_via_records: W too short");
    const std::size_t n1 = w.size() - 1;   // vertices
    std::vector<std::int32_t> h(n1, 0);
    for (std::size_t j = 1; j < n1; ++j) {
        std::int64_t run_min = w[j];
        std::int32_t count = 0;
        for (std::size_t k = j; k-- > 0;) {
            // run_min = min of W over [k+1, j]
            if (w[k] <= run_min) ++count;
            if (w[k] < run_min) run_min = w[k];
        }
        h[j] = count;
    }
    return h;
}

PlaneTree decode(const std::vector<std::int64_t>& w) {
    if (w.size() < 2 || w.front() != 0)
        throw std::invalid_argument("decode: W must start at 0 and have >= 2 entries");
    std::vector<std::int32_t> deg(w.size() - 1);
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        deg[j] = static_cast<std::int32_t>(w[j + 1] - w[j] + 1);
    return PlaneTree(std::move(deg));
}

PlaneTree mirror(const PlaneTree& tree) {
    const auto& deg = tree.degrees();
    const auto& sz = tree.subtree_sizes();
    std::vector<std::int32_t> out;
    out.reserve(deg.size());
    // DFS emitting children in reversed order. Pushing children left-to-right
    // makes the stack pop them right-to-left, and each popped child's block
    // completes before its left sibling surfaces.
    std::vector<std::int32_t> stack;
    stack.push_back(0);
    while (!stack.empty()) {
        const std::int32_t v = stack.back();
        stack.pop_back();
        out.push_back(deg[v]);
        std::int32_t child = v + 1;
        for (std::int32_t i = 0; i < deg[v]; ++i) {
            stack.push_back(child);
            child += sz[child];
        }
    }
    return PlaneTree(std::move(out));
}

std::int64_t total_path_length(const PlaneTree& tree) {
    const auto h = height(tree);
    std::int64_t lambda = 0;
    for (const auto d : h) lambda += d;
    return lambda;
}

std::int64_t path_length_from_contour(const std::vector<std::int32_t>& c) {
    if (c.empty() || c.size() % 2 == 0)
        throw std::invalid_argument("contour must have odd length 2n+1");
    const std::int64_t n = static_cast<std::int64_t>(c.size()) / 2;
    std::int64_t interior = 0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) interior += c[i];
    const std::int64_t four_lambda = 2 * n + 2 * interior + c.front() + c.back();
    if (four_lambda % 4 != 0)
        throw std::invalid_argument("contour integral identity violated (not a +-1 contour?)");
    return four_lambda / 4;
}

std::int64_t ancestor_pair_count(const PlaneTree& tree) {
    const auto& sz = tree.subtree_sizes();
    std::int64_t pairs = 0;
    for (const auto s : sz) pairs += s - 1;
    return pairs;
}

} // namespace snakes
