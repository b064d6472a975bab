#include "vk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace vk::diag {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

int bin_index(double coord, double L, int bins) {
    const int b = static_cast<int>(coord / L * bins);
    return std::clamp(b, 0, bins - 1);
}

}  // namespace

OrderTimeSeries OrderTimeSeries::window_from(double t0) const {
    OrderTimeSeries out;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t0) continue;
        out.times.push_back(times[k]);
        out.polar_order.push_back(polar_order[k]);
        out.global_angle.push_back(global_angle[k]);
        out.mean_omega.push_back(mean_omega[k]);
        out.density_variance.push_back(density_variance[k]);
    }
    return out;
}

void append(OrderTimeSeries& series, double t, const OrderSample& s) {
    double angle = s.angle;
    if (!series.global_angle.empty()) {
        const double prev = series.global_angle.back();
        angle = prev + wrap_angle(s.angle - prev);
    }
    series.times.push_back(t);
    series.polar_order.push_back(std::clamp(s.polar_order, 0.0, 1.0));
    series.global_angle.push_back(angle);
    series.mean_omega.push_back(s.mean_omega);
    series.density_variance.push_back(s.density_variance);
}

Vec2 mean_heading(const micro::ParticleEnsemble& ens) {
    Vec2 m;
    for (double th : ens.theta) {
        m.x += std::cos(th);
        m.y += std::sin(th);
    }
    const double n = static_cast<double>(std::max<std::size_t>(ens.size(), 1));
    return {m.x / n, m.y / n};
}

Vec2 mean_heading(const macro::MacroState& s) {
    double mass = 0.0;
    Vec2 m;
    for (std::size_t c = 0; c < s.cells(); ++c) {
        mass += s.rho[c];
        m.x += s.mx[c];
        m.y += s.my[c];
    }
    if (mass <= 0.0) return {};
    return {m.x / mass, m.y / mass};
}

double polar_order(const micro::ParticleEnsemble& ens) {
    const Vec2 m = mean_heading(ens);
    return std::min(1.0, std::hypot(m.x, m.y));
}

double polar_order(const macro::MacroState& s) {
    const Vec2 m = mean_heading(s);
    return std::min(1.0, std::hypot(m.x, m.y));
}

double mean_omega(const micro::ParticleEnsemble& ens) { return mean_of(ens.omega); }

double mean_omega(const macro::MacroState& s) {
    const double mass = s.total_mass();
    return mass > 0.0 ? s.total_angular_momentum() / mass : 0.0;
}

BinnedField bin_particles(const micro::ParticleEnsemble& ens, double L, int bins) {
    if (bins < 1) throw std::invalid_argument("bin_particles: bins must be >= 1");
    BinnedField f;
    f.bins = bins;
    f.L = L;
    f.shot_noise = true;
    const std::size_t nb = static_cast<std::size_t>(bins) * bins;
    f.mass.assign(nb, 0.0);
    f.sum_cos.assign(nb, 0.0);
    f.sum_sin.assign(nb, 0.0);
    f.sum_omega.assign(nb, 0.0);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const std::size_t b = static_cast<std::size_t>(bin_index(ens.y[i], L, bins)) * bins +
                              bin_index(ens.x[i], L, bins);
        f.mass[b] += 1.0;
        f.sum_cos[b] += std::cos(ens.theta[i]);
        f.sum_sin[b] += std::sin(ens.theta[i]);
        f.sum_omega[b] += ens.omega[i];
    }
    return f;
}

BinnedField bin_state(const macro::MacroState& s, int bins) {
    if (bins < 1) throw std::invalid_argument("bin_state: bins must be >= 1");
    BinnedField f;
    f.bins = bins;
    f.L = s.L;
    f.shot_noise = false;
    const std::size_t nb = static_cast<std::size_t>(bins) * bins;
    f.mass.assign(nb, 0.0);
    f.sum_cos.assign(nb, 0.0);
    f.sum_sin.assign(nb, 0.0);
    f.sum_omega.assign(nb, 0.0);
    const double area = s.dx * s.dy;
    for (int j = 0; j < s.ny; ++j) {
        const std::size_t bj = static_cast<std::size_t>(j) * bins / s.ny;
        for (int i = 0; i < s.nx; ++i) {
            const std::size_t bi = static_cast<std::size_t>(i) * bins / s.nx;
            const std::size_t b = bj * bins + bi;
            const std::size_t c = s.index(i, j);
            f.mass[b] += s.rho[c] * area;
            f.sum_cos[b] += s.mx[c] * area;
            f.sum_sin[b] += s.my[c] * area;
            f.sum_omega[b] += s.m_omega[c] * area;
        }
    }
    return f;
}

int default_micro_bins(double L, double R) {
    return std::max(1, static_cast<int>(std::floor(L / R)));
}

int default_macro_bins(int nx) {
    for (int b = std::min(nx, 64); b > 1; --b) {
        if (nx % b == 0) return b;
    }
    return std::max(1, std::min(nx, 64));
}

double density_variance(const BinnedField& f) {
    const double mu = mean_of(f.mass);
    if (mu <= 0.0) return 0.0;
    double var = 0.0;
    for (double m : f.mass) var += (m - mu) * (m - mu);
    var /= static_cast<double>(f.mass.size());
    if (f.shot_noise) var -= mu;
    return var / (mu * mu);
}

double wave_energy_fraction(const BinnedField& f) {
    const int n = f.bins;
    const std::size_t nb = static_cast<std::size_t>(n) * n;
    std::vector<std::complex<double>> z(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        if (f.mass[b] > 0.0) z[b] = {f.sum_cos[b] / f.mass[b], f.sum_sin[b] / f.mass[b]};
    }

    // Separable 2-D DFT: rows, then columns.
    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) twiddle[k] = std::polar(1.0, -kTwoPi * k / n);
    std::vector<std::complex<double>> rows(nb);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            std::complex<double> acc;
            for (int i = 0; i < n; ++i) acc += z[j * n + i] * twiddle[(k * i) % n];
            rows[j * n + k] = acc;
        }
    }
    double total = 0.0;
    double best = 0.0;
    for (int kx = 0; kx < n; ++kx) {
        for (int ky = 0; ky < n; ++ky) {
            std::complex<double> acc;
            for (int j = 0; j < n; ++j) acc += rows[j * n + kx] * twiddle[(ky * j) % n];
            const double e = std::norm(acc);
            total += e;
            if (kx != 0 || ky != 0) best = std::max(best, e);
        }
    }
    return total > 0.0 ? best / total : 0.0;
}

double cluster_rotation(const BinnedField& f) {
    const double mu = mean_of(f.mass);
    double weight = 0.0;
    double acc = 0.0;
    for (std::size_t b = 0; b < f.mass.size(); ++b) {
        if (f.mass[b] <= 0.0 || f.mass[b] < mu) continue;
        acc += std::fabs(f.sum_omega[b]);  // = mass * |bin mean omega|
        weight += f.mass[b];
    }
    return weight > 0.0 ? acc / weight : 0.0;
}

OrderSample sample(const micro::ParticleEnsemble& ens, double L, int bins) {
    const Vec2 m = mean_heading(ens);
    OrderSample s;
    s.polar_order = std::min(1.0, std::hypot(m.x, m.y));
    s.angle = std::atan2(m.y, m.x);
    s.mean_omega = mean_omega(ens);
    s.density_variance = density_variance(bin_particles(ens, L, bins));
    return s;
}

OrderSample sample(const macro::MacroState& st, int bins) {
    const Vec2 m = mean_heading(st);
    OrderSample s;
    s.polar_order = std::min(1.0, std::hypot(m.x, m.y));
    s.angle = std::atan2(m.y, m.x);
    s.mean_omega = mean_omega(st);
    s.density_variance = density_variance(bin_state(st, bins));
    return s;
}

std::optional<PeriodEstimate> detect_period(const OrderTimeSeries& series,
                                            const PeriodOptions& opts) {
    const std::size_t n = series.size();
    if (n < 3) return std::nullopt;
    if (mean_of(series.polar_order) < opts.min_polar_order) return std::nullopt;

    const double tm = mean_of(series.times);
    const double am = mean_of(series.global_angle);
    double stt = 0.0;
    double sta = 0.0;
    double saa = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dt = series.times[k] - tm;
        const double da = series.global_angle[k] - am;
        stt += dt * dt;
        sta += dt * da;
        saa += da * da;
    }
    if (stt <= 0.0 || saa <= 0.0) return std::nullopt;

    const double slope = sta / stt;
    const double r2 = (sta * sta) / (stt * saa);
    const double span = series.times.back() - series.times.front();
    const double periods = std::fabs(slope) * span / kTwoPi;
    if (periods < opts.min_periods || r2 < opts.min_confidence) return std::nullopt;

    return PeriodEstimate{kTwoPi / std::fabs(slope), r2, slope};
}

std::string to_string(Pattern p) {
    switch (p) {
        case Pattern::rotating_clusters: return "rotating_clusters";
        case Pattern::traveling_wave: return "traveling_wave";
        case Pattern::synchronized: return "synchronized";
        case Pattern::disordered: return "disordered";
    }
    return "disordered";
}

Classification classify_pattern(const OrderTimeSeries& series, std::span<const BinnedField> fields,
                                const ClassifierThresholds& th) {
    Classification out;
    if (series.empty()) return out;

    const double t0 = series.times.front();
    const double t1 = series.times.back();
    const OrderTimeSeries steady = series.window_from(t1 - th.window_fraction * (t1 - t0));
    const OrderTimeSeries tail = series.window_from(t1 - th.period_window_fraction * (t1 - t0));

    PatternMetrics& m = out.metrics;
    m.polar_order = mean_of(steady.polar_order);
    if (fields.empty()) {
        m.density_variance = mean_of(steady.density_variance);
    } else {
        for (const auto& f : fields) {
            m.density_variance += density_variance(f);
            m.wave_energy_fraction += wave_energy_fraction(f);
            m.cluster_rotation += cluster_rotation(f);
        }
        const double nf = static_cast<double>(fields.size());
        m.density_variance /= nf;
        m.wave_energy_fraction /= nf;
        m.cluster_rotation /= nf;
    }
    m.period = detect_period(tail, th.period);

    if (m.polar_order > th.sync_polar_order && m.period &&
        m.density_variance < th.uniform_density_variance) {
        out.label = Pattern::synchronized;
    } else if (m.density_variance < th.uniform_density_variance &&
               m.wave_energy_fraction > th.wave_energy_fraction) {
        out.label = Pattern::traveling_wave;
    } else if (m.density_variance > th.cluster_density_variance &&
               m.cluster_rotation > th.cluster_min_rotation &&
               m.polar_order < th.cluster_max_polar_order) {
        out.label = Pattern::rotating_clusters;
    } else {
        out.label = Pattern::disordered;
    }
    return out;
}

}  // namespace vk::diag
