#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the quadrature, Bessel or neighbor-search code under test.

#include <cstddef>

#include "vk/microsim.hpp"
#include "vk/roe.hpp"

namespace oracle {

/// (1/pi) int_0^pi e^{x cos t} cos(order t) dt by the composite trapezoid rule.
double bessel_i(int order, double x, std::size_t panels);

/// int tau(t) e^{kappa cos t} dt / int e^{kappa cos t} dt over (-pi, pi], first
/// component, both by the trapezoid rule.
double c1(double kappa, std::size_t panels);

struct Moments {
    double K1;
    double K2;
};

/// Composite Simpson on [0, pi] with `panels` panels; the running integral
/// inside g is built panel by panel with Simpson's rule on the midpoints.
/// Integrands in double, sums accumulated in long double.
Moments simpson_K1_K2(double kappa, std::size_t panels, double prefactor);

/// g evaluated with the same Simpson construction at a single point.
double simpson_g(double gamma, double kappa, std::size_t panels, double prefactor);

/// All-pairs local means with minimum-image distances.
vk::micro::LocalMeans brute_force_local_means(const vk::micro::ParticleEnsemble& ens,
                                              const vk::micro::MicroParams& p);

/// Central-difference Jacobian of the physical flux.
vk::macro::Mat4 fd_jacobian(const vk::macro::Cons& u, const vk::macro::FluxCoeffs& k, double h);

}  // namespace oracle
