#include "vk/particles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vk::micro {

void ParticleEnsemble::validate(double L) const {
    const std::size_t n = x.size();
    if (y.size() != n || theta.size() != n || omega.size() != n) {
        throw std::invalid_argument("ParticleEnsemble: array lengths differ");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] >= 0.0 && x[i] < L) || !(y[i] >= 0.0 && y[i] < L)) {
            throw std::invalid_argument("ParticleEnsemble: particle " + std::to_string(i) +
                                        " outside [0, L)^2");
        }
        if (!(theta[i] > -std::numbers::pi && theta[i] <= std::numbers::pi)) {
            throw std::invalid_argument("ParticleEnsemble: heading of particle " +
                                        std::to_string(i) + " outside (-pi, pi]");
        }
        if (!std::isfinite(omega[i])) {
            throw std::invalid_argument("ParticleEnsemble: non-finite angular velocity");
        }
    }
}

}  // namespace vk::micro
