#pragma once

#include <cstdint>
#include <vector>

namespace vk::coeffs {

/// Constants closing the macroscopic system for a given concentration
/// kappa = k_theta / alpha^2.
struct ClosureCoefficients {
    double kappa = 0.0;
    double c1 = 0.0;  // I1(kappa)/I0(kappa): transport speed of rho and rho*omega_bar
    double c2 = 0.0;  // K2/K1: convection speed of the direction field
    double K1 = 0.0;
    double K2 = 0.0;
    double quad_error = 0.0;  // estimated absolute error on K1 and K2

    bool operator==(const ClosureCoefficients&) const = default;
};

struct GciMoments {
    double K1 = 0.0;
    double K2 = 0.0;
    double quad_error = 0.0;
};

/// Product equilibrium: von Mises in heading times Gaussian in angular velocity.
struct EquilibriumPair {
    double theta_bar = 0.0;
    double omega_bar = 0.0;
    double kappa = 1.0;
    double omega_variance = 1.0;  // beta^2 / k_omega

    void validate() const;
};

struct HeadingSample {
    double theta;
    double omega;
};

/// I1(kappa)/I0(kappa). Throws std::domain_error for kappa <= 0.
double compute_c1(double kappa);

/// Odd, 2pi-periodic GCI profile
///   g(G) = s * (G - pi * int_0^G e^{-kappa cos} / int_0^pi e^{-kappa cos}),
/// with s = 1/kappa unless a prefactor is given. gamma outside (-pi, pi] is
/// reduced first.
double gci_g(double gamma, double kappa);
double gci_g(double gamma, double kappa, double prefactor);

/// K1 = int sin(t) N0(t) g(t) dt and K2 = int cos(t) sin(t) N0(t) g(t) dt over
/// (-pi, pi], N0 the von Mises density centred at 0.
///
/// Throws QuadratureError if the error estimate exceeds 1e-8 or |K1| < 1e-12.
GciMoments compute_K1_K2(double kappa);
GciMoments compute_K1_K2(double kappa, double g_prefactor);

/// c1, K1, K2, c2 = K2/K1 and the quadrature error in one call.
ClosureCoefficients compute_closure(double kappa);

double von_mises_density(double theta, double theta_bar, double kappa);
double gaussian_density(double omega, double omega_bar, double variance);

/// Independent draws: theta from the von Mises factor (Best-Fisher rejection
/// with a wrapped-Cauchy envelope), omega from the Gaussian factor.
/// Deterministic in `seed`; theta is returned in (-pi, pi].
std::vector<HeadingSample> sample_equilibrium(const EquilibriumPair& eq, std::size_t n,
                                              std::uint64_t seed);

}  // namespace vk::coeffs
