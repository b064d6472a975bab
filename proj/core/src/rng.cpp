#include "vk/rng.hpp"

#include <cmath>
#include <numbers>

namespace vk {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter,
                               std::uint64_t lane) const {
    std::uint64_t h = splitmix64(seed_);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ counter);
    return splitmix64(h ^ lane);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter, std::uint64_t lane) const {
    // 53 random mantissa bits, shifted into (0, 1].
    return (static_cast<double>(bits(stream, counter, lane) >> 11) + 1.0) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t stream, std::uint64_t counter,
                                                  std::uint64_t pair_index) const {
    const double u1 = uniform(stream, counter, 2 * pair_index);
    const double u2 = uniform(stream, counter, 2 * pair_index + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace vk
