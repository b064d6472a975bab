#include "vk/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vk::coeffs {
namespace {

constexpr double kSeriesLimit = 15.0;

void check_args(int order, double x) {
    if (order != 0 && order != 1) {
        throw std::domain_error("bessel_i: unsupported order " + std::to_string(order));
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("bessel_i: argument must be nonnegative");
    }
}

// sum_k (x/2)^{2k+order} / (k! (k+order)!); all terms positive.
double series(int order, double x) {
    const double q = 0.25 * x * x;
    double term = (order == 0) ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k, truncated at the
// smallest term.
double asymptotic_scaled(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        const double mag = std::fabs(term);
        if (mag > prev) break;
        sum += term;
        prev = mag;
        if (mag < 1e-17 * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i(int order, double x) {
    check_args(order, x);
    if (x <= kSeriesLimit) return series(order, x);
    return std::exp(x) * asymptotic_scaled(order, x);
}

double bessel_i_scaled(int order, double x) {
    check_args(order, x);
    if (x <= kSeriesLimit) return std::exp(-x) * series(order, x);
    return asymptotic_scaled(order, x);
}

}  // namespace vk::coeffs
