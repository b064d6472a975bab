#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vk/coefficients.hpp"
#include "vk/diagnostics.hpp"
#include "vk/macro_state.hpp"
#include "vk/roe.hpp"
#include "vk/sink.hpp"

namespace vk::macro {

struct MacroParams {
    coeffs::ClosureCoefficients coeffs;
    std::optional<double> pressure_coef;  // lambda; 1/kappa when unset
    double dt = 0.001;
    int nx = 200;
    int ny = 200;
    double L = 1.0;
    double t_end = 1.0;
    double cfl_max = 0.9;

    /// Coefficients computed for kappa, everything else at defaults.
    static MacroParams for_kappa(double kappa);

    double lambda() const;
    FluxCoeffs flux() const { return {coeffs.c1, coeffs.c2, lambda()}; }
    std::uint64_t steps() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const MacroParams&) const = default;
};

/// Advances (rho, rho omega_bar, rho Omega) by p.dt with x(dt/2), y(dt),
/// x(dt/2) Roe sweeps on the periodic grid. Throws NumericalAbort on a CFL
/// violation (dt * max speed / min(dx, dy) > cfl_max) or a non-positive
/// density.
void conservative_step(MacroState& s, const MacroParams& p);

/// Rescales rho Omega to length rho in every cell. Throws NumericalAbort if a
/// direction vector is shorter than 1e-14.
void relaxation_step(MacroState& s);

/// Rotates Omega by omega_bar * dt in every cell.
void source_step(MacroState& s, double dt);

/// conservative_step, relaxation_step, source_step.
void full_step(MacroState& s, const MacroParams& p);

/// Largest characteristic speed over all cells and both directions.
double max_wave_speed(const MacroState& s, const FluxCoeffs& k);

enum class MacroInitKind { constant, random, well_prepared, bump };

/// constant:      rho0, Omega = (cos theta0, sin theta0), omega_bar = omega0
/// random:        rho = rho0 (1 + rho_amplitude u), omega_bar = omega0 +
///                omega_amplitude u', Omega uniform on the circle per cell
/// well_prepared: rho = 2 + sin(2 pi x / L), constant Omega at theta0 and
///                rho omega_bar = lambda grad(rho) . Omega_perp, which keeps
///                Omega stationary
/// bump:          rho = rho0 + bump_amplitude exp(-(x - L/2)^2 / (2 (bump_width L)^2)),
///                constant Omega and omega_bar
struct MacroInitSpec {
    MacroInitKind kind = MacroInitKind::random;
    double rho0 = 1.0;
    double theta0 = 0.0;
    double omega0 = 0.5;
    double rho_amplitude = 0.01;
    double omega_amplitude = 0.1;
    double bump_amplitude = 0.5;
    double bump_width = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const MacroInitSpec&) const = default;
};

MacroState make_initial_state(const MacroParams& p, const MacroInitSpec& init);

struct MacroSchedule {
    double snapshot_every = 0.0;  // <= 0: first and last state only
    double diag_every = 0.01;
    double field_window_fraction = 0.1;
    int bins = 0;  // 0: default binning
};

struct MacroRunSummary {
    std::uint64_t steps = 0;
    double t_final = 0.0;
    diag::OrderTimeSeries series;
    std::vector<double> total_mass;              // per diagnostic sample
    std::vector<double> total_angular_momentum;  // per diagnostic sample
    double max_mass_drift = 0.0;                 // relative, checked every step
    double max_momentum_drift = 0.0;             // relative to max(|M0|, mass0), every step
    double max_direction_defect = 0.0;           // max | |Omega| - 1 |, every step
    std::vector<diag::BinnedField> window_fields;
    MacroState final_state;
};

MacroRunSummary run_macro(const MacroParams& p, const MacroInitSpec& init, SnapshotSink& out,
                          const MacroSchedule& schedule = {});
/// Same loop from a prepared state.
MacroRunSummary run_macro(const MacroParams& p, MacroState state, SnapshotSink& out,
                          const MacroSchedule& schedule = {});

}  // namespace vk::macro
