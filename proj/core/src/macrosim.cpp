#include "vk/macrosim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "vk/errors.hpp"

namespace vk::macro {
namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(fmt::format("macro.{}: {}", field, what));
}

// One 1-D pass over a periodic line of n cells; `get` and `put` map the line
// to the state in the sweep frame.
template <class Get, class Put>
double sweep_line(int n, const FluxCoeffs& k, double ratio, std::vector<Cons>& u,
                  std::vector<Cons>& flux, Get get, Put put) {
    u.resize(static_cast<std::size_t>(n));
    flux.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[i] = get(i);
    double smax = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        flux[i] = roe_flux(u[i], u[(i + 1) % n], k, &s);  // interface i + 1/2
        smax = std::max(smax, s);
    }
    for (int i = 0; i < n; ++i) {
        const Cons& fr = flux[i];
        const Cons& fl = flux[(i + n - 1) % n];
        Cons v = u[i];
        for (int c = 0; c < 4; ++c) v[c] -= ratio * (fr[c] - fl[c]);
        put(i, v);
    }
    return smax;
}

void sweep_x(MacroState& s, const FluxCoeffs& k, double h, double& smax) {
    const double ratio = h / s.dx;
    double local_max = 0.0;
#pragma omp parallel reduction(max : local_max)
    {
        std::vector<Cons> u;
        std::vector<Cons> flux;
#pragma omp for schedule(static)
        for (int j = 0; j < s.ny; ++j) {
            const double m = sweep_line(
                s.nx, k, ratio, u, flux,
                [&](int i) {
                    const auto c = s.index(i, j);
                    return Cons{s.rho[c], s.m_omega[c], s.mx[c], s.my[c]};
                },
                [&](int i, const Cons& v) {
                    const auto c = s.index(i, j);
                    s.rho[c] = v[0];
                    s.m_omega[c] = v[1];
                    s.mx[c] = v[2];
                    s.my[c] = v[3];
                });
            local_max = std::max(local_max, m);
        }
    }
    smax = std::max(smax, local_max);
}

void sweep_y(MacroState& s, const FluxCoeffs& k, double h, double& smax) {
    const double ratio = h / s.dy;
    double local_max = 0.0;
#pragma omp parallel reduction(max : local_max)
    {
        std::vector<Cons> u;
        std::vector<Cons> flux;
#pragma omp for schedule(static)
        for (int i = 0; i < s.nx; ++i) {
            const double m = sweep_line(
                s.ny, k, ratio, u, flux,
                [&](int j) {
                    const auto c = s.index(i, j);
                    return Cons{s.rho[c], s.m_omega[c], s.my[c], s.mx[c]};
                },
                [&](int j, const Cons& v) {
                    const auto c = s.index(i, j);
                    s.rho[c] = v[0];
                    s.m_omega[c] = v[1];
                    s.my[c] = v[2];
                    s.mx[c] = v[3];
                });
            local_max = std::max(local_max, m);
        }
    }
    smax = std::max(smax, local_max);
}

void check_positive(const MacroState& s) {
    for (std::size_t c = 0; c < s.cells(); ++c) {
        if (!(s.rho[c] > 0.0) || !std::isfinite(s.m_omega[c]) || !std::isfinite(s.mx[c]) ||
            !std::isfinite(s.my[c])) {
            throw NumericalAbort(fmt::format("macro: non-positive or non-finite state in cell ({}, {})",
                                             c % static_cast<std::size_t>(s.nx),
                                             c / static_cast<std::size_t>(s.nx)));
        }
    }
}

void check_cfl(double dt, double smax, const MacroState& s, double cfl_max) {
    const double cfl = dt * smax / std::min(s.dx, s.dy);
    if (cfl > cfl_max) {
        throw NumericalAbort(fmt::format("macro: CFL number {:.4g} exceeds cfl_max = {:.4g}", cfl, cfl_max));
    }
}

double cell_speed(const Cons& u, const FluxCoeffs& k) {
    const auto ev = eigenvalues(primitive(u), k);
    double m = 0.0;
    for (double e : ev) m = std::max(m, std::fabs(e));
    return m;
}

}  // namespace

MacroParams MacroParams::for_kappa(double kappa) {
    MacroParams p;
    p.coeffs = coeffs::compute_closure(kappa);
    return p;
}

double MacroParams::lambda() const {
    return pressure_coef ? *pressure_coef : 1.0 / coeffs.kappa;
}

std::uint64_t MacroParams::steps() const {
    return static_cast<std::uint64_t>(std::llround(t_end / dt));
}

void MacroParams::validate() const {
    require(std::isfinite(coeffs.kappa) && coeffs.kappa > 0.0, "kappa", "must be positive");
    require(std::isfinite(coeffs.c1) && coeffs.c1 > 0.0, "c1", "must be positive");
    require(std::isfinite(coeffs.c2), "c2", "must be finite");
    require(std::isfinite(lambda()) && lambda() >= 0.0, "pressure_coef", "must be non-negative");
    require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
    require(nx >= 1, "nx", "must be at least 1");
    require(ny >= 1, "ny", "must be at least 1");
    require(std::isfinite(L) && L > 0.0, "L", "must be positive");
    require(std::isfinite(t_end) && t_end >= 0.0, "t_end", "must be non-negative");
    require(cfl_max > 0.0 && cfl_max < 1.0, "cfl_max", "must lie in (0, 1)");
}

void conservative_step(MacroState& s, const MacroParams& p) {
    const FluxCoeffs k = p.flux();
    check_cfl(p.dt, max_wave_speed(s, k), s, p.cfl_max);

    double smax = 0.0;
    sweep_x(s, k, 0.5 * p.dt, smax);
    check_positive(s);
    sweep_y(s, k, p.dt, smax);
    check_positive(s);
    sweep_x(s, k, 0.5 * p.dt, smax);
    check_positive(s);
    check_cfl(p.dt, smax, s, p.cfl_max);
}

void relaxation_step(MacroState& s) {
    for (std::size_t c = 0; c < s.cells(); ++c) {
        const double norm = std::hypot(s.mx[c], s.my[c]);
        if (norm < 1e-14) {
            throw NumericalAbort(fmt::format("macro: undefined direction in cell ({}, {})",
                                             c % static_cast<std::size_t>(s.nx),
                                             c / static_cast<std::size_t>(s.nx)));
        }
        const double scale = s.rho[c] / norm;
        s.mx[c] *= scale;
        s.my[c] *= scale;
    }
}

void source_step(MacroState& s, double dt) {
    for (std::size_t c = 0; c < s.cells(); ++c) {
        const double phi = s.m_omega[c] / s.rho[c] * dt;
        if (phi == 0.0) continue;
        const double cs = std::cos(phi);
        const double sn = std::sin(phi);
        const double x = s.mx[c];
        const double y = s.my[c];
        s.mx[c] = cs * x - sn * y;
        s.my[c] = sn * x + cs * y;
    }
}

void full_step(MacroState& s, const MacroParams& p) {
    conservative_step(s, p);
    relaxation_step(s);
    source_step(s, p.dt);
}

double max_wave_speed(const MacroState& s, const FluxCoeffs& k) {
    double m = 0.0;
    for (std::size_t c = 0; c < s.cells(); ++c) {
        m = std::max(m, cell_speed({s.rho[c], s.m_omega[c], s.mx[c], s.my[c]}, k));
        m = std::max(m, cell_speed({s.rho[c], s.m_omega[c], s.my[c], s.mx[c]}, k));
    }
    return m;
}

void MacroInitSpec::validate() const {
    auto req = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ConfigError(fmt::format("init.{}: {}", field, what));
    };
    req(std::isfinite(rho0) && rho0 > 0.0, "rho0", "must be positive");
    req(std::isfinite(theta0), "theta0", "must be finite");
    req(std::isfinite(omega0), "omega0", "must be finite");
    req(rho_amplitude >= 0.0 && rho_amplitude < 1.0, "rho_amplitude", "must lie in [0, 1)");
    req(std::isfinite(omega_amplitude) && omega_amplitude >= 0.0, "omega_amplitude",
        "must be non-negative");
    req(std::isfinite(bump_amplitude) && rho0 + std::min(bump_amplitude, 0.0) > 0.0,
        "bump_amplitude", "must keep the density positive");
    req(std::isfinite(bump_width) && bump_width > 0.0, "bump_width", "must be positive");
}

MacroState make_initial_state(const MacroParams& p, const MacroInitSpec& init) {
    p.validate();
    init.validate();
    MacroState s(p.nx, p.ny, p.L);
    const double ox = std::cos(init.theta0);
    const double oy = std::sin(init.theta0);

    std::mt19937_64 gen(init.seed);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            const auto c = s.index(i, j);
            const double x = s.cell_x(i);
            double rho = init.rho0;
            double omega = init.omega0;
            double dx = ox;
            double dy = oy;
            switch (init.kind) {
                case MacroInitKind::constant:
                    break;
                case MacroInitKind::random: {
                    rho = init.rho0 * (1.0 + init.rho_amplitude * sym(gen));
                    omega = init.omega0 + init.omega_amplitude * sym(gen);
                    const double a = angle(gen);
                    dx = std::cos(a);
                    dy = std::sin(a);
                    break;
                }
                case MacroInitKind::well_prepared: {
                    const double kx = 2.0 * kPi / p.L;
                    rho = 2.0 + std::sin(kx * x);
                    // grad(rho) . Omega_perp with Omega_perp = (-oy, ox)
                    omega = p.lambda() * kx * std::cos(kx * x) * (-oy) / rho;
                    break;
                }
                case MacroInitKind::bump: {
                    const double sigma = init.bump_width * p.L;
                    const double r = x - 0.5 * p.L;
                    rho = init.rho0 + init.bump_amplitude * std::exp(-r * r / (2.0 * sigma * sigma));
                    break;
                }
            }
            s.rho[c] = rho;
            s.m_omega[c] = rho * omega;
            s.mx[c] = rho * dx;
            s.my[c] = rho * dy;
        }
    }
    return s;
}

MacroRunSummary run_macro(const MacroParams& p, const MacroInitSpec& init, SnapshotSink& out,
                          const MacroSchedule& schedule) {
    return run_macro(p, make_initial_state(p, init), out, schedule);
}

MacroRunSummary run_macro(const MacroParams& p, MacroState state, SnapshotSink& out,
                          const MacroSchedule& schedule) {
    p.validate();
    if (state.nx != p.nx || state.ny != p.ny || state.L != p.L) {
        throw ConfigError("macro: initial state does not match the grid parameters");
    }
    const std::uint64_t nsteps = p.steps();
    const auto every = [&](double interval) -> std::uint64_t {
        if (!(interval > 0.0)) return 0;
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(interval / p.dt)));
    };
    const std::uint64_t snap_every = every(schedule.snapshot_every);
    const std::uint64_t diag_every = std::max<std::uint64_t>(1, every(schedule.diag_every));
    const int bins = schedule.bins > 0 ? schedule.bins : diag::default_macro_bins(p.nx);
    const double field_from = p.t_end * (1.0 - schedule.field_window_fraction);

    MacroRunSummary summary;
    const double mass0 = state.total_mass();
    const double mom0 = state.total_angular_momentum();
    const double mom_scale = std::max(std::fabs(mom0), mass0);

    auto observe = [&](std::uint64_t s, bool last) {
        const double t = static_cast<double>(s) * p.dt;
        if (s % diag_every == 0 || last) {
            diag::append(summary.series, t, diag::sample(state, bins));
            summary.total_mass.push_back(state.total_mass());
            summary.total_angular_momentum.push_back(state.total_angular_momentum());
            if (t >= field_from) summary.window_fields.push_back(diag::bin_state(state, bins));
        }
        if (s == 0 || last || (snap_every > 0 && s % snap_every == 0)) {
            out.write(MacroSnapshot{t, state});
        }
    };

    observe(0, nsteps == 0);
    for (std::uint64_t s = 1; s <= nsteps; ++s) {
        full_step(state, p);
        summary.max_mass_drift =
            std::max(summary.max_mass_drift, std::fabs(state.total_mass() - mass0) / mass0);
        summary.max_momentum_drift = std::max(
            summary.max_momentum_drift, std::fabs(state.total_angular_momentum() - mom0) / mom_scale);
        summary.max_direction_defect =
            std::max(summary.max_direction_defect, state.max_direction_defect());
        observe(s, s == nsteps);
    }

    summary.steps = nsteps;
    summary.t_final = static_cast<double>(nsteps) * p.dt;
    summary.final_state = std::move(state);
    return summary;
}

}  // namespace vk::macro
