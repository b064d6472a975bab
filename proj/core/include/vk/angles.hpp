#pragma once

#include <cmath>
#include <numbers>

namespace vk {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 tau(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Reduce an angle to (-pi, pi].
inline double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (theta > -std::numbers::pi && theta <= std::numbers::pi) return theta;
    double r = std::remainder(theta, two_pi);  // in [-pi, pi]
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

/// Reduce a coordinate to [0, L).
inline double wrap_coordinate(double x, double L) {
    if (x >= 0.0 && x < L) return x;
    double r = x - L * std::floor(x / L);
    if (r >= L || r < 0.0) r = 0.0;
    return r;
}

}  // namespace vk
