#include "vk/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "vk/angles.hpp"
#include "vk/bessel.hpp"
#include "vk/errors.hpp"
#include "vk/quadrature.hpp"

namespace vk::coeffs {
namespace {

constexpr double kPi = std::numbers::pi;

void require_kappa(double kappa, const char* who) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::domain_error(std::string(who) + ": kappa must be positive and finite");
    }
}

// e^{-kappa (1 + cos phi)}: the GCI weight rescaled by e^{-kappa}, which
// cancels in the ratio and keeps the integrand inside [0, 1].
struct GciWeight {
    double kappa;
    double operator()(double phi) const { return std::exp(-kappa * (1.0 + std::cos(phi))); }
};

class GciProfile {
public:
    GciProfile(double kappa, double prefactor)
        : kappa_(kappa), prefactor_(prefactor) {
        const auto den = integrate(GciWeight{kappa}, 0.0, kPi, {1e-15, 4000});
        denominator_ = den.value;
        inner_tol_ = 1e-12 * denominator_;
    }

    double operator()(double gamma) const {
        gamma = wrap_angle(gamma);
        if (gamma == 0.0) return 0.0;
        const auto num = integrate(GciWeight{kappa_}, 0.0, gamma, {inner_tol_, 4000});
        const double scale = prefactor_ * kPi / denominator_;
        max_error_ = std::max(max_error_, scale * num.abs_error);
        return prefactor_ * gamma - scale * num.value;
    }

    double max_error() const { return max_error_; }

private:
    double kappa_;
    double prefactor_;
    double denominator_ = 0.0;
    double inner_tol_ = 0.0;
    mutable double max_error_ = 0.0;
};

}  // namespace

void EquilibriumPair::validate() const {
    if (!(kappa > 0.0)) throw std::domain_error("EquilibriumPair: kappa must be positive");
    if (!(omega_variance > 0.0)) {
        throw std::domain_error("EquilibriumPair: omega_variance must be positive");
    }
}

double compute_c1(double kappa) {
    require_kappa(kappa, "compute_c1");
    return bessel_i_scaled(1, kappa) / bessel_i_scaled(0, kappa);
}

double gci_g(double gamma, double kappa) {
    require_kappa(kappa, "gci_g");
    return gci_g(gamma, kappa, 1.0 / kappa);
}

double gci_g(double gamma, double kappa, double prefactor) {
    require_kappa(kappa, "gci_g");
    return GciProfile(kappa, prefactor)(gamma);
}

GciMoments compute_K1_K2(double kappa) {
    require_kappa(kappa, "compute_K1_K2");
    return compute_K1_K2(kappa, 1.0 / kappa);
}

GciMoments compute_K1_K2(double kappa, double g_prefactor) {
    require_kappa(kappa, "compute_K1_K2");
    const GciProfile g(kappa, g_prefactor);
    const double norm = 1.0 / (2.0 * kPi * bessel_i_scaled(0, kappa));
    auto n0 = [&](double t) { return norm * std::exp(kappa * (std::cos(t) - 1.0)); };

    const QuadOptions outer{1e-10 * std::max(1.0, std::fabs(g_prefactor) * kappa), 2000};
    const auto k1 = integrate([&](double t) { return std::sin(t) * n0(t) * g(t); }, -kPi, kPi, outer);
    const auto k2 = integrate(
        [&](double t) { return std::cos(t) * std::sin(t) * n0(t) * g(t); }, -kPi, kPi, outer);

    GciMoments m;
    m.K1 = k1.value;
    m.K2 = k2.value;
    // Inner errors enter through int |sin| N0 <= 1.
    m.quad_error = std::max(k1.abs_error, k2.abs_error) + g.max_error();

    const double err_limit = 1e-8 * std::max(1.0, std::fabs(g_prefactor) * kappa);
    if (m.quad_error > err_limit) {
        throw QuadratureError("compute_K1_K2: quadrature error estimate exceeds 1e-8");
    }
    if (std::fabs(m.K1) < 1e-12) {
        throw QuadratureError("compute_K1_K2: |K1| below 1e-12, c2 = K2/K1 undefined");
    }
    return m;
}

ClosureCoefficients compute_closure(double kappa) {
    const auto m = compute_K1_K2(kappa);
    ClosureCoefficients c;
    c.kappa = kappa;
    c.c1 = compute_c1(kappa);
    c.K1 = m.K1;
    c.K2 = m.K2;
    c.c2 = m.K2 / m.K1;
    c.quad_error = m.quad_error;
    return c;
}

double von_mises_density(double theta, double theta_bar, double kappa) {
    require_kappa(kappa, "von_mises_density");
    return std::exp(kappa * (std::cos(theta - theta_bar) - 1.0)) /
           (2.0 * kPi * bessel_i_scaled(0, kappa));
}

double gaussian_density(double omega, double omega_bar, double variance) {
    if (!(variance > 0.0)) throw std::domain_error("gaussian_density: variance must be positive");
    const double d = omega - omega_bar;
    return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * kPi * variance);
}

std::vector<HeadingSample> sample_equilibrium(const EquilibriumPair& eq, std::size_t n,
                                              std::uint64_t seed) {
    eq.validate();
    if (n == 0) throw std::domain_error("sample_equilibrium: n must be at least 1");

    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(eq.omega_bar, std::sqrt(eq.omega_variance));

    const double k = eq.kappa;
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * k * k);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * k);
    const double r = (1.0 + rho * rho) / (2.0 * rho);

    std::vector<HeadingSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double theta;
        if (k < 1e-8) {
            theta = kPi * (2.0 * unif(gen) - 1.0);
        } else {
            double f;
            for (;;) {
                const double u1 = unif(gen);
                const double u2 = unif(gen);
                const double z = std::cos(kPi * u1);
                f = (1.0 + r * z) / (r + z);
                const double c = k * (r - f);
                if (c * (2.0 - c) - u2 > 0.0) break;
                if (u2 > 0.0 && std::log(c / u2) + 1.0 - c >= 0.0) break;
            }
            const double sign = unif(gen) < 0.5 ? -1.0 : 1.0;
            theta = eq.theta_bar + sign * std::acos(std::clamp(f, -1.0, 1.0));
        }
        out.push_back({wrap_angle(theta), normal(gen)});
    }
    return out;
}

}  // namespace vk::coeffs
