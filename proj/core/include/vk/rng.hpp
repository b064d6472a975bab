#pragma once

#include <cstdint>
#include <utility>

namespace vk {

/// Stateless counter-based generator: every (seed, stream, counter, lane)
/// tuple maps to an independent 64-bit word through a chain of SplitMix64
/// finalizers. Per-particle noise is drawn from (seed, particle id, step,
/// sub-step), so results do not depend on how particles are scheduled.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter, std::uint64_t lane) const;

    /// Uniform in (0, 1]; never returns 0 so it is safe under log().
    double uniform(std::uint64_t stream, std::uint64_t counter, std::uint64_t lane) const;

    /// Two independent standard normals (Box-Muller on lanes 2k, 2k+1).
    std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t counter,
                                          std::uint64_t pair_index = 0) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace vk
