#pragma once

#include <cstddef>
#include <vector>

namespace vk::micro {

/// Structure-of-arrays state of N agents on the periodic square [0, L)^2.
struct ParticleEnsemble {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> theta;  // (-pi, pi]
    std::vector<double> omega;

    ParticleEnsemble() = default;
    explicit ParticleEnsemble(std::size_t n) : x(n), y(n), theta(n), omega(n) {}

    std::size_t size() const { return x.size(); }

    /// Throws std::invalid_argument if array lengths differ, a position lies
    /// outside [0, L), a heading outside (-pi, pi], or any value is non-finite.
    void validate(double L) const;

    bool operator==(const ParticleEnsemble&) const = default;
};

}  // namespace vk::micro
