#include "snakes/snake_stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "snakes/tree_codec.hpp"

namespace snakes {

std::int64_t max_oscillation(const std::vector<std::int32_t>& h, std::int64_t w) {
    const std::int64_t n = static_cast<std::int64_t>(h.size()) - 1;
    if (w < 1 || w > n) throw std::invalid_argument("max_oscillation: window out of range");
    std::deque<std::int64_t> maxq, minq;
    std::int64_t best = 0;
    for (std::int64_t i = 0; i <= n; ++i) {
        while (!maxq.empty() && h[maxq.back()] <= h[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && h[minq.back()] >= h[i]) minq.pop_back();
        minq.push_back(i);
        const std::int64_t lo = i - w;
        if (!maxq.empty() && maxq.front() < lo) maxq.pop_front();
        if (!minq.empty() && minq.front() < lo) minq.pop_front();
        if (i >= w) best = std::max<std::int64_t>(best, h[maxq.front()] - h[minq.front()]);
    }
    return best;
}

double holder_statistic(const std::vector<std::int32_t>& h, double b_n, double gamma,
                        const std::vector<std::int64_t>& window_grid) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("holder_statistic: gamma must lie in (0,1)");
    const std::int64_t n = static_cast<std::int64_t>(h.size()) - 1;
    if (n < 1) return 0.0;

    std::vector<std::int64_t> grid = window_grid;
    if (grid.empty()) {
        for (std::int64_t w = 1; w <= n; w *= 2) grid.push_back(w);
        if (grid.back() != n) grid.push_back(n);
    }
    const double nd = static_cast<double>(n);
    double best = 0.0;
    for (const std::int64_t w : grid) {
        const double osc = static_cast<double>(max_oscillation(h, w));
        const double term = (b_n / nd) * osc / std::pow(static_cast<double>(w) / nd, gamma);
        best = std::max(best, term);
    }
    return best;
}

namespace {

/// Fenwick tree counting inserted labels; prefix(i) = #labels <= i. 1-indexed
/// internally, values are 0-based.
class Fenwick {
public:
    explicit Fenwick(std::size_t size) : tree_(size + 1, 0) {}
    void add(std::int32_t value, std::int32_t delta) {
        for (std::size_t k = static_cast<std::size_t>(value) + 1; k < tree_.size(); k += k & (~k + 1))
            tree_[k] += delta;
    }
    std::int32_t prefix(std::int32_t value) const {
        std::int32_t s = 0;
        for (std::size_t k = static_cast<std::size_t>(value) + 1; k > 0; k -= k & (~k + 1))
            s += tree_[k];
        return s;
    }

private:
    std::vector<std::int32_t> tree_;
};

void check_permutation(const std::vector<std::int32_t>& perm, std::size_t n1) {
    if (perm.size() != n1) throw std::invalid_argument("perm must label every vertex");
    std::vector<bool> seen(n1, false);
    for (const auto p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= n1 || seen[p])
            throw std::invalid_argument("perm is not a permutation of {0..n}");
        seen[p] = true;
    }
}

} // namespace

std::int64_t inversions(const PlaneTree& tree, const std::vector<std::int32_t>& perm) {
    const std::size_t n1 = tree.vertex_count();
    check_permutation(perm, n1);
    const auto& deg = tree.degrees();
    const auto& sz = tree.subtree_sizes();

    Fenwick bit(n1);
    std::int64_t count = 0;
    std::int32_t on_stack = 0;

    struct Frame { std::int32_t v; std::int32_t next_child; std::int32_t remaining; };
    std::vector<Frame> stack;
    auto enter = [&](std::int32_t v) {
        count += on_stack - bit.prefix(perm[v]);   // ancestors with larger label
        bit.add(perm[v], 1);
        ++on_stack;
        stack.push_back({v, v + 1, deg[v]});
    };
    enter(0);
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.remaining > 0) {
            const std::int32_t child = top.next_child;
            top.next_child += sz[child];
            --top.remaining;
            enter(child);
        } else {
            bit.add(perm[top.v], -1);
            --on_stack;
            stack.pop_back();
        }
    }
    return count;
}

double expected_inversions(const PlaneTree& tree) {
    const std::int64_t lambda = total_path_length(tree);
    if (lambda != ancestor_pair_count(tree))
        throw std::logic_error("path length disagrees with ancestor-pair count");
    return static_cast<double>(lambda) / 2.0;
}

CouplingCheckReport inversion_coupling_check(const PlaneTree& tree, std::size_t replicates,
                                             std::uint64_t seed) {
    if (replicates < 2) throw std::invalid_argument("coupling check: need >= 2 replicates");
    const auto& sz = tree.subtree_sizes();
    const auto c_depth = contour(tree);
    const std::size_t n1 = tree.vertex_count();
    const std::int64_t n = tree.edge_count();
    const double lambda_half = expected_inversions(tree);

    CouplingCheckReport report;
    report.replicates = replicates;
    report.coupling_bound = 2.0 * static_cast<double>(n);
    report.coupling_bound_ok = true;

    double exact = 0.0;
    for (std::size_t v = 1; v < sz.size(); ++v)
        exact += static_cast<double>(sz[v]) * static_cast<double>(sz[v]);
    exact *= 1.0 / 12.0;
    report.exact_variance = exact;

    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    std::vector<double> u(n1);
    std::vector<std::int32_t> order(n1), perm(n1);
    std::vector<std::int64_t> progeny_rank(n1);
    std::vector<double> displacement(n1);
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng = Rng::stream(seed, r);

        // Permutation from i.i.d. uniforms. The statistic A_u = rank of u's
        // label among its strict descendants is independent across vertices
        // and uniform on {0..D_u}; inversions grouped by the ancestor give
        // I = sum_u A_u exactly.
        for (std::size_t v = 0; v < n1; ++v) u[v] = rng.next_double();
        for (std::size_t v = 0; v < n1; ++v) order[v] = static_cast<std::int32_t>(v);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::int32_t a, std::int32_t b) { return u[a] < u[b]; });
        for (std::size_t rank = 0; rank < n1; ++rank)
            perm[order[rank]] = static_cast<std::int32_t>(rank);

        // A_u by inserting positions in increasing label order: when u's turn
        // comes, exactly its smaller-labelled descendants lie in (u, u+D_u].
        Fenwick positions(n1);
        std::int64_t a_sum = 0;
        for (std::size_t rank = 0; rank < n1; ++rank) {
            const std::int32_t v = order[rank];
            const std::int32_t hi = v + sz[v] - 1;
            progeny_rank[v] = positions.prefix(hi) - positions.prefix(v);
            a_sum += progeny_rank[v];
            positions.add(v, 1);
        }

        // Couple: Y_u = (A_u - D_u/2 + V_u - 1/2)/(D_u + 1) is exactly
        // uniform on (-1/2, 1/2), and Y_u (D_u+1) tracks A_u - D_u/2 within
        // the jitter V_u - 1/2.
        displacement[0] = 0.0;
        for (std::size_t v = 1; v < n1; ++v) {
            const double d_u = static_cast<double>(sz[v] - 1);
            const double jitter = rng.next_double();
            displacement[v] = DisplacementLaw::quantize(
                (static_cast<double>(progeny_rank[v]) - d_u / 2.0 + jitter - 0.5) / (d_u + 1.0));
        }
        const SpatialSnake snake = decorate_with(tree, displacement);

        double j_sum = 0.0;
        for (const double s : snake.position) j_sum += s;
        s1 += j_sum;
        s2 += j_sum * j_sum;
        s3 += j_sum * j_sum * j_sum;
        s4 += j_sum * j_sum * j_sum * j_sum;

        // R_hat: on [i, i+1) the spatial contour value at the deeper endpoint.
        double integral = 0.0, max_dev = 0.0;
        for (std::size_t i = 0; i + 1 < c_depth.size(); ++i) {
            const bool down_deeper = c_depth[i] > c_depth[i + 1];
            const double rhat = down_deeper ? snake.contour_position[i] : snake.contour_position[i + 1];
            integral += rhat;
            max_dev = std::max(max_dev,
                               std::abs(snake.contour_position[i + 1] - snake.contour_position[i]));
        }
        report.max_integral_residual =
            std::max(report.max_integral_residual, std::abs(integral / 2.0 - j_sum));
        report.max_interp_deviation = std::max(report.max_interp_deviation, max_dev);

        const std::int64_t inv = inversions(tree, perm);
        if (inv != a_sum) throw std::logic_error("inversions disagree with the progeny-rank sum");
        const double gap = std::abs(j_sum - (static_cast<double>(inv) - lambda_half));
        report.max_coupling_gap = std::max(report.max_coupling_gap, gap);
        if (gap > report.coupling_bound) report.coupling_bound_ok = false;
    }

    const double r = static_cast<double>(replicates);
    const double e1 = s1 / r, e2 = s2 / r, e3 = s3 / r, e4 = s4 / r;
    const double mu2 = e2 - e1 * e1;
    const double mu4 = e4 - 4.0 * e1 * e3 + 6.0 * e1 * e1 * e2 - 3.0 * e1 * e1 * e1 * e1;
    report.sample_variance = mu2 * r / (r - 1.0);
    // Var(s^2) ~ (mu4 - mu2^2)/R
    const double se = std::sqrt(std::max(mu4 - mu2 * mu2, 0.0) / r);
    report.variance_z = (report.sample_variance - exact) / std::max(se, 1e-300);
    return report;
}

PeakSet extract_peaks(const SpatialSnake& snake, double scale, double eta, PeakTimeBase base) {
    if (!(scale > 0.0) || !(eta > 0.0))
        throw std::invalid_argument("extract_peaks: scale and eta must be > 0");
    const std::size_t n1 = snake.vertex_count();
    const double n = static_cast<double>(n1 - 1);
    PeakSet peaks;
    if (n1 <= 1) return peaks;

    std::vector<std::int64_t> first_visit;
    if (base == PeakTimeBase::contour_first_visit) {
        const auto seq = contour_vertices(*snake.tree);
        first_visit.assign(n1, -1);
        for (std::size_t t = 0; t < seq.size(); ++t)
            if (first_visit[seq[t]] < 0) first_visit[seq[t]] = static_cast<std::int64_t>(t);
    }

    const double threshold = eta * scale;
    for (std::size_t v = 1; v < n1; ++v) {
        const double y = snake.displacement[v];
        if (std::abs(y) > threshold) {
            PeakPoint p;
            p.vertex = v;
            p.value = y / scale;
            p.x = base == PeakTimeBase::lex ? static_cast<double>(v) / n
                                            : static_cast<double>(first_visit[v]) / (2.0 * n);
            peaks.points.push_back(p);
        }
    }
    return peaks;
}

bool CompactSet::empty() const {
    if (!points.empty()) return false;
    for (const auto& line : polylines)
        if (!line.empty()) return false;
    return true;
}

CompactSet graph_with_peaks(const std::vector<double>& f, const PeakSet& peaks) {
    if (f.size() < 2) throw std::invalid_argument("graph_with_peaks: need >= 2 samples of f");
    CompactSet set;
    const std::size_t m = f.size();
    std::vector<std::array<double, 2>> graph(m);
    for (std::size_t i = 0; i < m; ++i)
        graph[i] = {static_cast<double>(i) / static_cast<double>(m - 1), f[i]};
    set.polylines.push_back(std::move(graph));

    for (const auto& p : peaks.points) {
        const auto i = static_cast<std::size_t>(
            std::lround(std::clamp(p.x, 0.0, 1.0) * static_cast<double>(m - 1)));
        const double x = static_cast<double>(i) / static_cast<double>(m - 1);
        set.polylines.push_back({{x, f[i]}, {x, f[i] + p.value}});
    }
    return set;
}

namespace {

std::vector<std::array<double, 2>> discretize(const CompactSet& set, double spacing) {
    std::vector<std::array<double, 2>> pts = set.points;
    for (const auto& line : set.polylines) {
        if (line.size() == 1) { pts.push_back(line[0]); continue; }
        for (std::size_t i = 0; i + 1 < line.size(); ++i) {
            const double dx = line[i + 1][0] - line[i][0];
            const double dy = line[i + 1][1] - line[i][1];
            const double len = std::hypot(dx, dy);
            const auto steps = static_cast<std::size_t>(std::ceil(len / spacing));
            for (std::size_t k = 0; k < std::max<std::size_t>(steps, 1); ++k) {
                const double t = static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(steps, 1));
                pts.push_back({line[i][0] + t * dx, line[i][1] + t * dy});
            }
        }
        pts.push_back(line.back());
    }
    return pts;
}

/// max over `from` of the min distance to `to`, with the early-break scan:
/// once some candidate lies within the running worst, the query point cannot
/// raise the max and the inner loop stops.
double directed_hausdorff(const std::vector<std::array<double, 2>>& from,
                          const std::vector<std::array<double, 2>>& to) {
    double worst_sq = 0.0;
    for (const auto& q : from) {
        double best_sq = std::numeric_limits<double>::infinity();
        for (const auto& p : to) {
            const double dx = p[0] - q[0], dy = p[1] - q[1];
            const double d_sq = dx * dx + dy * dy;
            if (d_sq < best_sq) {
                best_sq = d_sq;
                if (best_sq <= worst_sq) break;
            }
        }
        worst_sq = std::max(worst_sq, best_sq);
    }
    return std::sqrt(worst_sq);
}

} // namespace

double hausdorff_distance(const CompactSet& a, const CompactSet& b, double resolution) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty set");
    if (!(resolution > 0.0)) throw std::invalid_argument("hausdorff: resolution must be > 0");
    const auto pa = discretize(a, resolution);
    const auto pb = discretize(b, resolution);
    return std::max(directed_hausdorff(pa, pb), directed_hausdorff(pb, pa));
}

std::vector<std::int64_t> weak_record_times(const std::vector<std::int64_t>& s) {
    std::vector<std::int64_t> times;
    std::int64_t running_max = std::numeric_limits<std::int64_t>::min();
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s[t] >= running_max) {
            running_max = s[t];
            times.push_back(static_cast<std::int64_t>(t));
        }
    }
    return times;
}

std::int64_t sample_record_time(const OffspringLaw& law, std::int64_t cap, Rng& rng) {
    std::int64_t s = 0;
    for (std::int64_t k = 1; k <= cap; ++k) {
        s += law.sample(rng) - 1;
        if (s >= 0) return k;
    }
    return cap;
}

BranchCompositionReport branch_composition(const PlaneTree& tree, double c_const, double mu0) {
    if (!(c_const > 0.0) || !(mu0 > 0.0) || mu0 > 1.0)
        throw std::invalid_argument("branch_composition: need C > 0 and mu0 in (0,1]");
    const std::int64_t n = tree.edge_count();
    BranchCompositionReport report;
    report.threshold = 1.0 - mu0 / 2.0;
    report.window = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(c_const * std::log(std::max<std::int64_t>(n, 2)))));
    if (n < 1) return report;

    const auto h = height(tree);
    const std::int32_t max_depth = *std::max_element(h.begin(), h.end());
    if (max_depth < report.window) return report;   // vacuous: no long path

    // cnt[d] = first-children among the current root path at depths 1..d
    std::vector<std::int32_t> cnt(static_cast<std::size_t>(max_depth) + 1, 0);
    const std::int64_t w = report.window;
    for (std::size_t v = 1; v < tree.vertex_count(); ++v) {
        const std::int32_t d = h[v];
        cnt[d] = cnt[d - 1] + (tree.is_first_child(v) ? 1 : 0);
        if (d >= w) {
            const double fraction =
                static_cast<double>(cnt[d] - cnt[d - w]) / static_cast<double>(w);
            ++report.windows_checked;
            report.max_first_child_fraction = std::max(report.max_first_child_fraction, fraction);
            if (fraction > report.threshold) report.violated = true;
        }
    }
    return report;
}

double uniform_vertex_progeny(const PlaneTree& tree, Rng& rng) {
    const std::int64_t n = tree.edge_count();
    if (n == 0) return 1.0;   // single root: its subtree is the whole tree
    const auto v = static_cast<std::size_t>(rng.next_below(tree.vertex_count()));
    return static_cast<double>(tree.subtree_sizes()[v]) / static_cast<double>(n);
}

} // namespace snakes
