#include "snakes/tree_sampler.hpp"

#include <cmath>

namespace snakes {

namespace {

std::uint64_t budget_for(std::int64_t n, const SampleOptions& opts) {
    if (opts.max_attempts > 0) return opts.max_attempts;
    return static_cast<std::uint64_t>(1e6 * std::sqrt(static_cast<double>(std::max<std::int64_t>(n, 1))));
}

} // namespace

std::vector<std::int64_t> BridgeWalk::partial_sums() const {
    std::vector<std::int64_t> s(increments.size() + 1);
    s[0] = 0;
    for (std::size_t i = 0; i < increments.size(); ++i) s[i + 1] = s[i] + increments[i];
    return s;
}

BridgeWalk sample_bridge(const OffspringLaw& law, std::int64_t n, Rng& rng,
                         const SampleOptions& opts) {
    if (n < 1) throw std::invalid_argument("sample_bridge: n >= 1 required");
    const std::int64_t N = n + 1;
    const std::uint64_t budget = budget_for(n, opts);

    BridgeWalk bridge;
    bridge.increments.resize(static_cast<std::size_t>(N));
    for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
        std::int64_t sum = 0;
        for (auto& x : bridge.increments) {
            x = law.sample(rng) - 1;
            sum += x;
        }
        if (sum == -1) return bridge;
    }
    throw SamplingFailure(
        "bridge rejection budget exhausted for '" + law.describe() + "' at n=" + std::to_string(n) +
            " (no tree of that size may exist: law period " + std::to_string(law.period()) + ")",
        n, budget);
}

bool is_excursion(const BridgeWalk& walk) {
    std::int64_t s = 0;
    const std::size_t N = walk.increments.size();
    for (std::size_t i = 0; i < N; ++i) {
        s += walk.increments[i];
        if (i + 1 < N && s < 0) return false;
    }
    return s == -1;
}

ShiftWitness cyclic_shift(const BridgeWalk& bridge) {
    const std::int64_t N = bridge.size();
    std::int64_t j = 1, running = bridge.increments[0], min_sum = running;
    for (std::int64_t k = 2; k <= N; ++k) {
        running += bridge.increments[static_cast<std::size_t>(k - 1)];
        if (running < min_sum) { min_sum = running; j = k; }
    }

    ShiftWitness witness;
    witness.j = j;
    witness.shifted.increments.resize(static_cast<std::size_t>(N));
    for (std::int64_t k = 1; k <= N; ++k)
        witness.shifted.increments[static_cast<std::size_t>(k - 1)] =
            bridge.increments[static_cast<std::size_t>((k + j - 1) % N)];
    return witness;
}

int count_valid_shifts(const BridgeWalk& bridge) {
    const std::int64_t N = bridge.size();
    int valid = 0;
    BridgeWalk rotated;
    rotated.increments.resize(static_cast<std::size_t>(N));
    for (std::int64_t j = 1; j <= N; ++j) {
        for (std::int64_t k = 1; k <= N; ++k)
            rotated.increments[static_cast<std::size_t>(k - 1)] =
                bridge.increments[static_cast<std::size_t>((k + j - 1) % N)];
        if (is_excursion(rotated)) ++valid;
    }
    return valid;
}

PlaneTree sample_tree(const OffspringLaw& law, std::int64_t n, Rng& rng,
                      const SampleOptions& opts) {
    if (n == 0) return singleton_tree();
    const BridgeWalk bridge = sample_bridge(law, n, rng, opts);
    ShiftWitness witness = cyclic_shift(bridge);
    std::vector<std::int32_t> deg(witness.shifted.increments.size());
    for (std::size_t k = 0; k < deg.size(); ++k) deg[k] = witness.shifted.increments[k] + 1;
    return PlaneTree(std::move(deg));
}

PlaneTree sample_tree_direct(const OffspringLaw& law, std::int64_t n, Rng& rng,
                             const SampleOptions& opts) {
    if (n == 0) return singleton_tree();
    const std::size_t want = static_cast<std::size_t>(n) + 1;
    const std::uint64_t budget = budget_for(n, opts);

    std::vector<std::int32_t> deg;
    deg.reserve(want);
    for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
        deg.clear();
        std::int64_t pending = 1;   // vertices awaiting a degree, depth-first
        while (pending > 0 && deg.size() <= want) {
            const std::int32_t d = law.sample(rng);
            deg.push_back(d);
            pending += d - 1;
        }
        if (pending == 0 && deg.size() == want) return PlaneTree(std::move(deg));
    }
    throw SamplingFailure("direct-growth budget exhausted for '" + law.describe() +
                              "' at n=" + std::to_string(n),
                          n, budget);
}

} // namespace snakes
