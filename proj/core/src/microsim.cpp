#include "vk/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "vk/angles.hpp"
#include "vk/coefficients.hpp"
#include "vk/errors.hpp"

namespace vk::micro {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxHalvings = 8;
// Counter value reserved for initial-condition draws; step counters never reach it.
constexpr std::uint64_t kInitCounter = std::numeric_limits<std::uint64_t>::max();

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(fmt::format("micro.{}: {}", field, what));
}

struct Accum {
    double jx = 0.0;
    double jy = 0.0;
    double w = 0.0;
    double wo = 0.0;
};

struct Frame {
    const double* x;
    const double* y;
    const double* cs;
    const double* sn;
    const double* omega;
};

inline void accumulate(const Frame& f, std::size_t i, std::size_t j, double L, double half,
                       double r2, Accum& a) {
    double dx = f.x[j] - f.x[i];
    double dy = f.y[j] - f.y[i];
    if (dx > half) dx -= L;
    else if (dx < -half) dx += L;
    if (dy > half) dy -= L;
    else if (dy < -half) dy += L;
    if (dx * dx + dy * dy > r2) return;
    a.jx += f.cs[j];
    a.jy += f.sn[j];
    a.w += 1.0;
    a.wo += f.omega[j];
}

bool finite_state(const ParticleEnsemble& e) {
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!std::isfinite(e.x[i]) || !std::isfinite(e.y[i]) || !std::isfinite(e.theta[i]) ||
            !std::isfinite(e.omega[i])) {
            return false;
        }
    }
    return true;
}

struct ParticleUpdate {
    const MicroParams& p;
    const CounterRng& rng;
    std::uint64_t id;
    std::uint64_t step;
    double jx;
    double jy;
    double jnorm;
    double omega_bar;

    double alignment(double theta) const {
        if (jnorm < 1e-14) return 0.0;
        // k sin(theta_bar - theta) with theta_bar the direction of J
        return p.k_theta * (jy * std::cos(theta) - jx * std::sin(theta)) / jnorm;
    }

    // Heap-numbered substeps: node n splits into 2n and 2n+1, each with its
    // own noise lane.
    void advance(double& theta, double& omega, double h, std::uint64_t node, int depth) const {
        const double force = alignment(theta);
        if (p.step_halving && depth < kMaxHalvings && std::fabs(force) * h > kStabilityLimit) {
            advance(theta, omega, 0.5 * h, 2 * node, depth + 1);
            advance(theta, omega, 0.5 * h, 2 * node + 1, depth + 1);
            return;
        }
        double xi = 0.0;
        double xi2 = 0.0;
        if (p.alpha2 > 0.0 || p.beta2 > 0.0) {
            const auto [a, b] = rng.normal_pair(id, step, node);
            xi = a;
            xi2 = b;
        }
        const double th = theta + (omega + force) * h + std::sqrt(2.0 * p.alpha2 * h) * xi;
        omega += p.k_omega * (omega_bar - omega) * h + std::sqrt(2.0 * p.beta2 * h) * xi2;
        theta = th;
    }
};

}  // namespace

double KernelSpec::peak() const { return 1.0 / (kPi * radius * radius); }

double KernelSpec::operator()(double d2) const { return d2 <= radius * radius ? peak() : 0.0; }

double MicroParams::stiffness() const { return dt * std::max(k_theta, k_omega); }

std::uint64_t MicroParams::steps() const {
    return static_cast<std::uint64_t>(std::llround(t_end / dt));
}

void MicroParams::validate() const {
    require(n >= 1, "n", "must be at least 1");
    require(std::isfinite(c) && c > 0.0, "c", "must be positive");
    require(std::isfinite(k_theta) && k_theta > 0.0, "k_theta", "must be positive");
    require(std::isfinite(k_omega) && k_omega > 0.0, "k_omega", "must be positive");
    require(std::isfinite(alpha2) && alpha2 >= 0.0, "alpha2", "must be non-negative");
    require(std::isfinite(beta2) && beta2 >= 0.0, "beta2", "must be non-negative");
    require(std::isfinite(L) && L > 0.0, "L", "must be positive");
    require(std::isfinite(R) && R > 0.0, "R", "must be positive");
    require(R < 0.5 * L, "R", "must be below L/2 for minimum-image distances");
    require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
    require(std::isfinite(t_end) && t_end >= 0.0, "t_end", "must be non-negative");
    if (!allow_stiff && stiffness() > kStabilityLimit) {
        throw ConfigError(fmt::format(
            "micro.dt: stability guard violated, dt * max(k_theta, k_omega) = {:.6g} > {} "
            "(set allow_stiff = true or pass --allow-stiff to override)",
            stiffness(), kStabilityLimit));
    }
}

void local_means(const ParticleEnsemble& ens, const MicroParams& p, CellList& cells,
                 LocalMeans& out) {
    const std::size_t n = ens.size();
    out.jx.resize(n);
    out.jy.resize(n);
    out.omega_bar.resize(n);
    out.weight.resize(n);

    const double L = p.L;
    const double r2 = p.R * p.R;
    const double kval = p.kernel().peak();
    const double inv_n = 1.0 / static_cast<double>(n);

    cells.build(ens.x, ens.y, L, p.R);
    const auto order = cells.order();

    // Copies in cell order so each neighbor cell is a contiguous run.
    auto& sc = out.scratch;
    sc.resize(5 * n);
    double* xs = sc.data();
    double* ys = xs + n;
    double* cs = ys + n;
    double* sn = cs + n;
    double* om = sn + n;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        xs[k] = ens.x[j];
        ys[k] = ens.y[j];
        cs[k] = std::cos(ens.theta[j]);
        sn[k] = std::sin(ens.theta[j]);
        om[k] = ens.omega[j];
    }

    auto finish = [&](std::size_t i, const Accum& a) {
        // The kernel is constant on its support, so sums are neighbor counts
        // scaled by its peak value.
        out.jx[i] = kval * a.jx * inv_n;
        out.jy[i] = kval * a.jy * inv_n;
        out.weight[i] = kval * a.w;
        out.omega_bar[i] = a.wo / a.w;
    };

    if (!cells.uses_cells()) {
        const double half = 0.5 * L;
        const Frame f{xs, ys, cs, sn, om};
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(n); ++kk) {
            const auto k = static_cast<std::size_t>(kk);
            Accum a;
            for (std::size_t j = 0; j < n; ++j) accumulate(f, k, j, L, half, r2, a);
            finish(order[k], a);
        }
        return;
    }

    const int m = cells.cells_per_side();
    const auto start = cells.cell_start();
#pragma omp parallel for schedule(dynamic, 16)
    for (int c = 0; c < m * m; ++c) {
        const int cx = c % m;
        const int cy = c / m;
        for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
            Accum a;
            for (int oy = -1; oy <= 1; ++oy) {
                int ny = cy + oy;
                double sy = 0.0;
                if (ny < 0) { ny += m; sy = -L; }
                else if (ny >= m) { ny -= m; sy = L; }
                for (int ox = -1; ox <= 1; ++ox) {
                    int nx = cx + ox;
                    double sx = 0.0;
                    if (nx < 0) { nx += m; sx = -L; }
                    else if (nx >= m) { nx -= m; sx = L; }
                    // Position of particle k relative to the shifted image of the neighbor cell.
                    const double px = xs[k] - sx;
                    const double py = ys[k] - sy;
                    const int nc = ny * m + nx;
                    for (std::size_t j = start[nc]; j < start[nc + 1]; ++j) {
                        const double dx = xs[j] - px;
                        const double dy = ys[j] - py;
                        const double in = dx * dx + dy * dy <= r2 ? 1.0 : 0.0;
                        a.jx += in * cs[j];
                        a.jy += in * sn[j];
                        a.w += in;
                        a.wo += in * om[j];
                    }
                }
            }
            finish(order[k], a);
        }
    }
}

LocalMeans local_means(const ParticleEnsemble& ens, const MicroParams& p) {
    CellList cells;
    LocalMeans out;
    local_means(ens, p, cells, out);
    return out;
}

void em_step(const ParticleEnsemble& ens, const MicroParams& p, const LocalMeans& lm,
             std::uint64_t step, ParticleEnsemble& next) {
    const std::size_t n = ens.size();
    if (next.size() != n) next = ParticleEnsemble(n);
    const CounterRng rng(p.seed);
    const double L = p.L;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double theta = ens.theta[i];
        next.x[i] = wrap_coordinate(ens.x[i] + p.c * std::cos(theta) * p.dt, L);
        next.y[i] = wrap_coordinate(ens.y[i] + p.c * std::sin(theta) * p.dt, L);

        const ParticleUpdate u{p,     rng,   i, step, lm.jx[i], lm.jy[i],
                               std::hypot(lm.jx[i], lm.jy[i]), lm.omega_bar[i]};
        double th = theta;
        double om = ens.omega[i];
        u.advance(th, om, p.dt, 1, 0);
        next.theta[i] = wrap_angle(th);
        next.omega[i] = om;
    }
}

ParticleEnsemble em_step(const ParticleEnsemble& ens, const MicroParams& p, const LocalMeans& lm,
                         std::uint64_t step) {
    ParticleEnsemble next(ens.size());
    em_step(ens, p, lm, step, next);
    return next;
}

MicroIntegrator::MicroIntegrator(MicroParams p) : p_(p) { p_.validate(); }

void MicroIntegrator::step(ParticleEnsemble& ens) {
    local_means(ens, p_, cells_, lm_);
    em_step(ens, p_, lm_, step_, next_);
    std::swap(ens, next_);
    ++step_;
}

void InitSpec::validate() const {
    auto req = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ConfigError(fmt::format("init.{}: {}", field, what));
    };
    req(positive_fraction >= 0.0 && positive_fraction <= 1.0, "positive_fraction",
        "must lie in [0, 1]");
    req(std::isfinite(omega_plus) && omega_plus >= 0.0, "omega_plus", "must be non-negative");
    req(std::isfinite(omega_minus) && omega_minus >= 0.0, "omega_minus", "must be non-negative");
    req(std::isfinite(theta0), "theta0", "must be finite");
    req(std::isfinite(omega0), "omega0", "must be finite");
    req(std::isfinite(kappa) && kappa > 0.0, "kappa", "must be positive");
    req(std::isfinite(omega_variance) && omega_variance > 0.0, "omega_variance",
        "must be positive");
}

ParticleEnsemble make_initial_ensemble(const MicroParams& p, const InitSpec& init) {
    init.validate();
    const std::size_t n = p.n;
    ParticleEnsemble e(n);
    const CounterRng rng(p.seed);
    for (std::size_t i = 0; i < n; ++i) {
        e.x[i] = wrap_coordinate(p.L * (1.0 - rng.uniform(i, kInitCounter, 0)), p.L);
        e.y[i] = wrap_coordinate(p.L * (1.0 - rng.uniform(i, kInitCounter, 1)), p.L);
    }

    switch (init.kind) {
        case InitKind::uniform: {
            const auto n_pos = static_cast<std::size_t>(
                std::floor(init.positive_fraction * static_cast<double>(n)));
            for (std::size_t i = 0; i < n; ++i) {
                e.theta[i] = wrap_angle(kPi * (2.0 * rng.uniform(i, kInitCounter, 2) - 1.0));
                const double u = rng.uniform(i, kInitCounter, 3);
                e.omega[i] = i < n_pos ? init.omega_plus * u : -init.omega_minus * u;
            }
            break;
        }
        case InitKind::aligned:
            for (std::size_t i = 0; i < n; ++i) {
                e.theta[i] = wrap_angle(init.theta0);
                e.omega[i] = init.omega0;
            }
            break;
        case InitKind::equilibrium: {
            const coeffs::EquilibriumPair eq{init.theta0, init.omega0, init.kappa,
                                             init.omega_variance};
            const auto draws = coeffs::sample_equilibrium(eq, n, splitmix64(p.seed ^ 0x5eedULL));
            for (std::size_t i = 0; i < n; ++i) {
                e.theta[i] = draws[i].theta;
                e.omega[i] = draws[i].omega;
            }
            break;
        }
    }
    return e;
}

MicroRunSummary run_micro(const MicroParams& p, const InitSpec& init, SnapshotSink& out,
                          const RunSchedule& schedule) {
    MicroIntegrator integ(p);
    ParticleEnsemble ens = make_initial_ensemble(p, init);

    const std::uint64_t nsteps = p.steps();
    const auto every = [&](double interval) -> std::uint64_t {
        if (!(interval > 0.0)) return 0;
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(interval / p.dt)));
    };
    const std::uint64_t snap_every = every(schedule.snapshot_every);
    const std::uint64_t diag_every = std::max<std::uint64_t>(1, every(schedule.diag_every));
    const int bins = schedule.bins > 0 ? schedule.bins : diag::default_micro_bins(p.L, p.R);
    const double field_from = p.t_end * (1.0 - schedule.field_window_fraction);

    MicroRunSummary summary;
    auto observe = [&](std::uint64_t s, bool last) {
        const double t = static_cast<double>(s) * p.dt;
        if (s % diag_every == 0 || last) {
            diag::append(summary.series, t, diag::sample(ens, p.L, bins));
            if (t >= field_from) summary.window_fields.push_back(diag::bin_particles(ens, p.L, bins));
        }
        if (s == 0 || last || (snap_every > 0 && s % snap_every == 0)) {
            out.write(MicroSnapshot{t, p.L, ens});
        }
    };

    observe(0, nsteps == 0);
    for (std::uint64_t s = 1; s <= nsteps; ++s) {
        integ.step(ens);
        if (!finite_state(ens)) {
            throw NumericalAbort(fmt::format("micro: non-finite state at step {}", s));
        }
        observe(s, s == nsteps);
    }

    summary.steps = nsteps;
    summary.t_final = static_cast<double>(nsteps) * p.dt;
    summary.final_polar_order = diag::polar_order(ens);
    summary.final_mean_omega = diag::mean_omega(ens);
    summary.final_state = std::move(ens);
    return summary;
}

}  // namespace vk::micro
