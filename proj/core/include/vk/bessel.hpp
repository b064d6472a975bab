#pragma once

namespace vk::coeffs {

/// Modified Bessel function of the first kind I_order(x), order in {0, 1}.
///
/// Power series for x <= 15, scaled large-argument expansion beyond. Relative
/// error is below 1e-12 over the whole range that does not overflow.
/// Throws std::domain_error for x < 0 or an unsupported order.
double bessel_i(int order, double x);

/// Exponentially scaled e^{-x} I_order(x). Finite for every x >= 0; use this
/// for ratios at large arguments.
double bessel_i_scaled(int order, double x);

}  // namespace vk::coeffs
