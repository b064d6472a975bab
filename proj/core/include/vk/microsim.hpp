#pragma once

#include <cstdint>
#include <vector>

#include "vk/cell_list.hpp"
#include "vk/diagnostics.hpp"
#include "vk/particles.hpp"
#include "vk/rng.hpp"
#include "vk/sink.hpp"

namespace vk::micro {

enum class KernelShape { indicator };

/// Radially symmetric interaction kernel normalized to unit integral.
struct KernelSpec {
    KernelShape shape = KernelShape::indicator;
    double radius = 1.0;

    /// Kernel value at squared distance d2.
    double operator()(double d2) const;
    /// Value inside the support, 1/(pi r^2) for the indicator.
    double peak() const;

    bool operator==(const KernelSpec&) const = default;
};

struct MicroParams {
    std::size_t n = 0;
    double c = 1.0;        // speed
    double k_theta = 1.0;  // heading alignment rate
    double k_omega = 1.0;  // angular-velocity alignment rate
    double alpha2 = 0.0;   // heading noise intensity; amplitude is sqrt(2 alpha2)
    double beta2 = 0.0;    // angular-velocity noise intensity
    double R = 1.0;        // interaction radius
    double L = 10.0;       // domain side
    double dt = 0.01;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    KernelShape kernel_shape = KernelShape::indicator;
    bool allow_stiff = false;   // skip the dt * max(k) <= 0.5 guard
    bool step_halving = false;  // split stiff particle updates, up to 8 levels

    KernelSpec kernel() const { return {kernel_shape, R}; }
    double stiffness() const;  // dt * max(k_theta, k_omega)
    std::uint64_t steps() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const MicroParams&) const = default;
};

inline constexpr double kStabilityLimit = 0.5;

/// Per-particle interaction sums.
///   J_i = (1/N) sum_j K(|x_i - x_j|) tau(theta_j)
///   omega_bar_i = sum_j K omega_j / sum_j K,  weight_i = sum_j K
/// The sums include j = i and use minimum-image distances.
struct LocalMeans {
    std::vector<double> jx;
    std::vector<double> jy;
    std::vector<double> omega_bar;
    std::vector<double> weight;
    std::vector<double> scratch;
};

/// Uses a cell list with cells no smaller than R; falls back to all pairs on
/// small domains.
LocalMeans local_means(const ParticleEnsemble& ens, const MicroParams& p);
void local_means(const ParticleEnsemble& ens, const MicroParams& p, CellList& cells,
                 LocalMeans& out);

/// One Euler-Maruyama step from `ens` with frozen local means. Noise for
/// particle i at step s comes from the (seed, i, s) counter stream, so the
/// result is independent of the thread count.
ParticleEnsemble em_step(const ParticleEnsemble& ens, const MicroParams& p, const LocalMeans& lm,
                         std::uint64_t step);
void em_step(const ParticleEnsemble& ens, const MicroParams& p, const LocalMeans& lm,
             std::uint64_t step, ParticleEnsemble& next);

/// Owns the scratch buffers of a run and the step counter.
class MicroIntegrator {
public:
    explicit MicroIntegrator(MicroParams p);

    void step(ParticleEnsemble& ens);
    std::uint64_t steps_taken() const { return step_; }
    double time() const { return static_cast<double>(step_) * p_.dt; }
    const MicroParams& params() const { return p_; }

private:
    MicroParams p_;
    CellList cells_;
    LocalMeans lm_;
    ParticleEnsemble next_;
    std::uint64_t step_ = 0;
};

enum class InitKind { uniform, aligned, equilibrium };

/// Positions are always uniform on [0, L)^2.
///  uniform:     theta uniform; omega = +omega_plus*U for the first
///               positive_fraction of ids, -omega_minus*U for the rest
///  aligned:     theta = theta0, omega = omega0
///  equilibrium: von Mises(theta0, kappa) x Gaussian(omega0, omega_variance)
struct InitSpec {
    InitKind kind = InitKind::uniform;
    double positive_fraction = 0.25;
    double omega_plus = 5.0;
    double omega_minus = 5.0;
    double theta0 = 0.0;
    double omega0 = 0.0;
    double kappa = 1.0;
    double omega_variance = 1.0;

    void validate() const;
    bool operator==(const InitSpec&) const = default;
};

ParticleEnsemble make_initial_ensemble(const MicroParams& p, const InitSpec& init);

struct RunSchedule {
    double snapshot_every = 0.0;  // <= 0: first and last state only
    double diag_every = 0.1;
    double field_window_fraction = 0.1;  // keep binned fields for the final share of the run
    int bins = 0;                        // 0: default binning
};

struct MicroRunSummary {
    std::uint64_t steps = 0;
    double t_final = 0.0;
    double final_polar_order = 0.0;
    double final_mean_omega = 0.0;
    diag::OrderTimeSeries series;
    std::vector<diag::BinnedField> window_fields;
    ParticleEnsemble final_state;
};

/// Integrates to t_end, sampling diagnostics and emitting snapshots. Throws
/// NumericalAbort if the state becomes non-finite.
MicroRunSummary run_micro(const MicroParams& p, const InitSpec& init, SnapshotSink& out,
                          const RunSchedule& schedule = {});

}  // namespace vk::micro
