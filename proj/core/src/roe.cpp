#include "vk/roe.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vk/errors.hpp"

namespace vk::macro {
namespace {

double discriminant(const Primitive& s, const FluxCoeffs& k) {
    const double d2 = k.c1 * k.lambda + k.c2 * (k.c2 - k.c1) * s.u * s.u;
    if (d2 < -1e-12) {
        throw NumericalAbort(
            fmt::format("macro: loss of hyperbolicity (discriminant {:.3e} at u = {:.6g})", d2, s.u));
    }
    return std::sqrt(std::max(d2, 0.0));
}

}  // namespace

Cons physical_flux(const Cons& u, const FluxCoeffs& k) {
    const double rho = u[0];
    const double pn = u[2];
    return {k.c1 * pn, k.c1 * u[1] * pn / rho, k.c2 * pn * pn / rho + k.lambda * rho,
            k.c2 * pn * u[3] / rho};
}

Primitive primitive(const Cons& u) { return {u[2] / u[0], u[3] / u[0], u[1] / u[0]}; }

Primitive roe_average(const Cons& left, const Cons& right) {
    const double sl = std::sqrt(left[0]);
    const double sr = std::sqrt(right[0]);
    const double inv = 1.0 / (sl + sr);
    // sqrt(rho) * q/rho = q / sqrt(rho)
    return {(left[2] / sl + right[2] / sr) * inv, (left[3] / sl + right[3] / sr) * inv,
            (left[1] / sl + right[1] / sr) * inv};
}

Mat4 flux_jacobian(const Primitive& s, const FluxCoeffs& k) {
    const double u = s.u;
    const double v = s.v;
    const double w = s.w;
    Mat4 a{};
    a[0] = {0.0, 0.0, k.c1, 0.0};
    a[1] = {-k.c1 * w * u, k.c1 * u, k.c1 * w, 0.0};
    a[2] = {k.lambda - k.c2 * u * u, 0.0, 2.0 * k.c2 * u, 0.0};
    a[3] = {-k.c2 * u * v, 0.0, k.c2 * v, k.c2 * u};
    return a;
}

Mat4 roe_matrix(const Cons& left, const Cons& right, const FluxCoeffs& k) {
    return flux_jacobian(roe_average(left, right), k);
}

std::array<double, 4> eigenvalues(const Primitive& s, const FluxCoeffs& k) {
    const double d = discriminant(s, k);
    const double cu = k.c2 * s.u;
    return {cu - d, cu + d, k.c1 * s.u, cu};
}

Cons apply_matrix_function(const Primitive& s, const FluxCoeffs& k, const Cons& du,
                           const std::function<double(double)>& f) {
    const double u = s.u;
    const double v = s.v;
    const double w = s.w;
    const double cu = k.c2 * u;
    const double scale =
        std::max({std::fabs(cu), std::fabs(k.c1 * u), std::sqrt(std::fabs(k.c1 * k.lambda)), 1e-300});
    const double d = std::max(discriminant(s, k), 1e-6 * scale);
    const double a = cu + d;
    const double b = cu - d;

    const double fa = f(a);
    const double fb = f(b);
    const double d1 = (fa - fb) / (a - b);
    const double d0 = fb - b * d1;

    // The (rho, pn) block has eigenvalues a and b; f of it is d0 I + d1 B.
    const double r = d0 * du[0] + d1 * k.c1 * du[2];
    const double pn = d0 * du[2] + d1 * ((k.lambda - k.c2 * u * u) * du[0] + 2.0 * cu * du[2]);

    // m - w rho is an eigen-direction with eigenvalue c1 u.
    const double m = w * r + f(k.c1 * u) * (du[1] - w * du[0]);

    const double fc = f(cu);
    double pt = fc * du[3];
    if (k.c2 != 0.0) {
        auto h = [&](double x, double fx) { return (fx - fc) * (k.c1 * u - x) / (cu - x); };
        const double ha = h(a, fa);
        const double hb = h(b, fb);
        const double h1 = (ha - hb) / (a - b);
        const double h0 = (a * hb - b * ha) / (a - b);
        pt += k.c2 * v * (h1 * du[2] + h0 * du[0] / k.c1);
    }
    return {r, m, pn, pt};
}

Cons roe_flux(const Cons& left, const Cons& right, const FluxCoeffs& k, double* max_speed) {
    const Primitive s = roe_average(left, right);
    const auto ev = eigenvalues(s, k);
    double smax = 0.0;
    for (double e : ev) smax = std::max(smax, std::fabs(e));
    const double delta = kEntropyFixFraction * smax;

    const Cons du{right[0] - left[0], right[1] - left[1], right[2] - left[2], right[3] - left[3]};
    const Cons diss =
        apply_matrix_function(s, k, du, [delta](double x) { return harten_abs(x, delta); });
    const Cons fl = physical_flux(left, k);
    const Cons fr = physical_flux(right, k);

    if (max_speed) *max_speed = smax;
    Cons out;
    for (int c = 0; c < 4; ++c) out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * diss[c];
    return out;
}

}  // namespace vk::macro
