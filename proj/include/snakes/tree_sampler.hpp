#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snakes/offspring.hpp"
#include "snakes/plane_tree.hpp"
#include "snakes/rng.hpp"

namespace snakes {

/// Raised when a rejection sampler exhausts its retry budget (e.g. binary
/// offspring with odd n, where no tree of that size exists).
class SamplingFailure : public std::runtime_error {
public:
    SamplingFailure(std::string what, std::int64_t n, std::uint64_t attempts)
        : std::runtime_error(std::move(what)), n_(n), attempts_(attempts) {}
    std::int64_t n() const { return n_; }
    std::uint64_t attempts() const { return attempts_; }

private:
    std::int64_t n_;
    std::uint64_t attempts_;
};

struct SampleOptions {
    /// Rejection attempts before giving up; 0 means the default 1e6*sqrt(n).
    std::uint64_t max_attempts = 0;
};

/**
 * BridgeWalk — N = n+1 i.i.d. steps X = xi - 1 conditioned on summing to -1.
 * Sampled by whole-vector rejection (a biased partial-resampling repair is
 * deliberately not offered).
 */
struct BridgeWalk {
    std::vector<std::int32_t> increments;   // each >= -1, total -1

    std::int64_t size() const { return static_cast<std::int64_t>(increments.size()); }
    /// Partial sums S(0..N), S(0) = 0.
    std::vector<std::int64_t> partial_sums() const;
};

/// The cyclic shift that turns a bridge into a Lukasiewicz excursion.
struct ShiftWitness {
    std::int64_t j = 0;        // first argmin of the bridge, in {1..N}
    BridgeWalk shifted;        // prefix sums >= 0 strictly before step N, S(N) = -1
};

BridgeWalk sample_bridge(const OffspringLaw& law, std::int64_t n, Rng& rng,
                         const SampleOptions& opts = {});

/// j = first index attaining the minimum of S(1..N);
/// shifted(k) = increments((k + j - 1 mod N) + 1).
ShiftWitness cyclic_shift(const BridgeWalk& bridge);

/// True iff the walk is a valid excursion (prefix sums >= 0 before the last
/// step, final sum -1).
bool is_excursion(const BridgeWalk& walk);

/// Scans all N cyclic shifts and returns the count of valid excursions;
/// the cycle lemma says exactly one. O(N^2), for debugging and tests.
int count_valid_shifts(const BridgeWalk& bridge);

/// T_n: the law's BGW tree conditioned to have n+1 vertices
/// (bridge -> cyclic shift -> degrees).
PlaneTree sample_tree(const OffspringLaw& law, std::int64_t n, Rng& rng,
                      const SampleOptions& opts = {});

/// Independent oracle: grow an unconditioned BGW tree depth-first, retry
/// until it has exactly n+1 vertices. Same law as sample_tree; meant for
/// n <= 1e3.
PlaneTree sample_tree_direct(const OffspringLaw& law, std::int64_t n, Rng& rng,
                             const SampleOptions& opts = {});

} // namespace snakes
