#pragma once

#include <cstddef>
#include <functional>

namespace vk::coeffs {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;  // estimated, always >= 0
    std::size_t intervals = 0;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    std::size_t max_intervals = 2000;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature of f over [a, b].
///
/// The interval with the largest local error estimate |K15 - G7| is bisected
/// until the summed estimate drops below opts.abs_tol. Throws QuadratureError
/// if max_intervals is exhausted first. a > b is allowed and flips the sign.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

}  // namespace vk::coeffs
