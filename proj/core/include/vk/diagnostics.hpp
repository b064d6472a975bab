#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vk/angles.hpp"
#include "vk/macro_state.hpp"
#include "vk/particles.hpp"

namespace vk::diag {

/// Global observables sampled over a run. All lists share one length.
struct OrderTimeSeries {
    std::vector<double> times;
    std::vector<double> polar_order;       // in [0, 1]
    std::vector<double> global_angle;      // unwrapped, radians
    std::vector<double> mean_omega;
    std::vector<double> density_variance;  // normalized, see density_variance()

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }

    /// Samples with times[k] >= t0, unwrapping preserved.
    OrderTimeSeries window_from(double t0) const;
};

/// One global measurement. `angle` is the wrapped direction of the mean
/// heading; append() unwraps it against the previous sample.
struct OrderSample {
    double polar_order = 0.0;
    double angle = 0.0;
    double mean_omega = 0.0;
    double density_variance = 0.0;
};

void append(OrderTimeSeries& series, double t, const OrderSample& s);

Vec2 mean_heading(const micro::ParticleEnsemble& ens);
/// Mass-weighted mean of Omega.
Vec2 mean_heading(const macro::MacroState& s);

double polar_order(const micro::ParticleEnsemble& ens);
double polar_order(const macro::MacroState& s);

double mean_omega(const micro::ParticleEnsemble& ens);
/// Mass-weighted mean of omega_bar: total angular momentum over total mass.
double mean_omega(const macro::MacroState& s);

/// Coarse square binning of a snapshot. For particles, `mass` is a count and
/// `shot_noise` is set so the Poisson part of the variance is removed.
struct BinnedField {
    int bins = 0;
    double L = 0.0;
    bool shot_noise = false;
    std::vector<double> mass;
    std::vector<double> sum_cos;    // mass-weighted
    std::vector<double> sum_sin;    // mass-weighted
    std::vector<double> sum_omega;  // mass-weighted
};

BinnedField bin_particles(const micro::ParticleEnsemble& ens, double L, int bins);
BinnedField bin_state(const macro::MacroState& s, int bins);

/// Default micro binning: bins of width >= R (32 x 32 for L = 64, R = 2).
int default_micro_bins(double L, double R);
/// Default macro binning: the largest divisor of nx not above 64.
int default_macro_bins(int nx);

/// Var(mass)/mean(mass)^2 over bins; for particle counts the Poisson
/// contribution mean(mass) is subtracted from Var first.
double density_variance(const BinnedField& f);

/// Share of the spectral energy of the per-bin mean heading e^{i theta}
/// carried by its strongest nonzero wavevector.
double wave_energy_fraction(const BinnedField& f);

/// Mass-weighted mean of |bin mean omega| over bins at or above mean density.
double cluster_rotation(const BinnedField& f);

OrderSample sample(const micro::ParticleEnsemble& ens, double L, int bins);
OrderSample sample(const macro::MacroState& s, int bins);

struct PeriodOptions {
    double min_polar_order = 0.5;  // mean polar order needed to track a direction
    double min_periods = 4.0;      // putative periods covered by the series
    double min_confidence = 0.9;   // R^2 of the linear fit

    bool operator==(const PeriodOptions&) const = default;
};

struct PeriodEstimate {
    double period = 0.0;
    double confidence = 0.0;  // R^2 of the linear fit of unwrapped angle vs time
    double angular_rate = 0.0;  // fitted slope
};

/// Rotation period of the global direction, 2 pi / |slope| of a least-squares
/// line through the unwrapped angle. Empty when the series is too incoherent,
/// too short, or too nonlinear to support an estimate.
std::optional<PeriodEstimate> detect_period(const OrderTimeSeries& series,
                                            const PeriodOptions& opts = {});

enum class Pattern { rotating_clusters, traveling_wave, synchronized, disordered };

std::string to_string(Pattern p);

struct ClassifierThresholds {
    double sync_polar_order = 0.9;
    double uniform_density_variance = 0.05;
    double cluster_density_variance = 0.3;
    double wave_energy_fraction = 0.5;
    double cluster_max_polar_order = 0.5;
    double cluster_min_rotation = 0.1;
    double window_fraction = 0.1;         // steady-state window for field metrics
    double period_window_fraction = 0.5;  // window handed to detect_period
    PeriodOptions period;

    bool operator==(const ClassifierThresholds&) const = default;
};

struct PatternMetrics {
    double polar_order = 0.0;
    double density_variance = 0.0;
    double wave_energy_fraction = 0.0;
    double cluster_rotation = 0.0;
    std::optional<PeriodEstimate> period;
};

struct Classification {
    Pattern label = Pattern::disordered;
    PatternMetrics metrics;
};

/// Rule-based labelling of a run from its time series and binned fields taken
/// inside the steady-state window. Metrics are averaged over the window.
Classification classify_pattern(const OrderTimeSeries& series, std::span<const BinnedField> fields,
                                const ClassifierThresholds& th = {});

}  // namespace vk::diag
