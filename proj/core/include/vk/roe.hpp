#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace vk::macro {

/// Coefficients of the conservative sub-system.
struct FluxCoeffs {
    double c1 = 1.0;
    double c2 = 0.0;
    double lambda = 0.0;  // pressure coefficient
};

/// Conserved variables in a sweep frame: (rho, rho*omega_bar, normal momentum,
/// tangential momentum). The x-sweep uses (rho, m, mx, my) and the y-sweep
/// (rho, m, my, mx).
using Cons = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// F(U) = (c1 pn, c1 m pn / rho, c2 pn^2 / rho + lambda rho, c2 pn pt / rho).
Cons physical_flux(const Cons& u, const FluxCoeffs& k);

/// Velocities of the quasilinear form: normal u = pn/rho, tangential v = pt/rho,
/// w = m/rho.
struct Primitive {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
};

Primitive primitive(const Cons& u);
/// sqrt(rho)-weighted averages; the flux Jacobian at these reproduces the flux
/// jump exactly.
Primitive roe_average(const Cons& left, const Cons& right);

/// dF/dU as a function of the primitive velocities only.
Mat4 flux_jacobian(const Primitive& s, const FluxCoeffs& k);
Mat4 roe_matrix(const Cons& left, const Cons& right, const FluxCoeffs& k);

/// Eigenvalues {c2 u - d, c2 u + d, c1 u, c2 u} with
/// d^2 = c1 lambda + c2 (c2 - c1) u^2. Throws NumericalAbort if d^2 < -1e-12.
std::array<double, 4> eigenvalues(const Primitive& s, const FluxCoeffs& k);

/// f(A) dU for the Jacobian A at `s`, evaluated through divided differences of
/// f on the spectrum so coincident eigenvalues need no eigenvector basis.
Cons apply_matrix_function(const Primitive& s, const FluxCoeffs& k, const Cons& du,
                           const std::function<double(double)>& f);

/// Harten-regularized absolute value.
inline double harten_abs(double s, double delta) {
    const double a = std::fabs(s);
    if (a >= delta || delta <= 0.0) return a;
    return (s * s + delta * delta) / (2.0 * delta);
}

inline constexpr double kEntropyFixFraction = 0.05;

/// Interface flux 0.5 (F_L + F_R) - 0.5 |A_roe| (U_R - U_L) with the Harten
/// fix at delta = 0.05 * max |eigenvalue|. Also reports the largest wave speed.
Cons roe_flux(const Cons& left, const Cons& right, const FluxCoeffs& k,
              double* max_speed = nullptr);

}  // namespace vk::macro
