// One criterion per invocation: prints "PASS <name>" or "FAIL <name>" followed
// by indented measurements. With no argument every criterion runs in turn.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "vk/coefficients.hpp"
#include "vk/diagnostics.hpp"
#include "vk/errors.hpp"
#include "vk/macrosim.hpp"
#include "vk/microsim.hpp"
#include "vk/roe.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

struct Report {
    bool ok = true;
    std::vector<std::string> lines;

    template <class... Args>
    void check(bool cond, fmt::format_string<Args...> f, Args&&... args) {
        lines.push_back(fmt::format("{} {}", cond ? "ok  " : "FAIL", fmt::format(f, std::forward<Args>(args)...)));
        ok = ok && cond;
    }
    template <class... Args>
    void note(fmt::format_string<Args...> f, Args&&... args) {
        lines.push_back(fmt::format("     {}", fmt::format(f, std::forward<Args>(args)...)));
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Report coefficient_oracles() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    for (double kappa : {0.5, 1.0, 4.0, 8.0}) {
        const double c1 = vk::coeffs::compute_c1(kappa);
        const double c1_ref = oracle::c1(kappa, 1'000'000);
        r.check(std::fabs(c1 - c1_ref) <= 1e-9, "kappa {}: |c1 - trapezoid| = {:.2e} (<= 1e-9)", kappa,
                std::fabs(c1 - c1_ref));
        const double g0 = std::fabs(vk::coeffs::gci_g(0.0, kappa));
        const double gpi = std::fabs(vk::coeffs::gci_g(kPi, kappa));
        r.check(g0 <= 1e-10 && gpi <= 1e-10, "kappa {}: |g(0)| = {:.2e}, |g(pi)| = {:.2e} (<= 1e-10)", kappa,
                g0, gpi);
        const auto m = vk::coeffs::compute_K1_K2(kappa);
        const auto ref = oracle::simpson_K1_K2(kappa, 1'000'000, 1.0 / kappa);
        const double e1 = std::fabs(m.K1 - ref.K1);
        const double e2 = std::fabs(m.K2 - ref.K2);
        r.check(e1 <= 1e-8 && e2 <= 1e-8, "kappa {}: |K1 - Simpson| = {:.2e}, |K2 - Simpson| = {:.2e} (<= 1e-8)",
                kappa, e1, e2);
    }
    const double s = seconds_since(t0);
    r.check(s < 5.0, "runtime {:.2f} s (< 5 s)", s);
    return r;
}

// ---------------------------------------------------------------------------

Report exact_micro_solution() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    {
        vk::micro::MicroParams p;
        p.n = 2000;
        p.L = 20.0;
        p.R = 1.0;
        p.k_theta = p.k_omega = 5.0;
        p.alpha2 = p.beta2 = 0.0;
        p.dt = 0.01;
        p.t_end = 10.0;
        p.seed = 3;
        vk::micro::InitSpec init;
        init.kind = vk::micro::InitKind::aligned;
        init.theta0 = 0.25;
        init.omega0 = 5.0;
        vk::micro::MicroIntegrator integ(p);
        auto e = vk::micro::make_initial_ensemble(p, init);
        double worst = 0.0;
        for (std::uint64_t s = 1; s <= p.steps(); ++s) {
            integ.step(e);
            const double exact = init.theta0 + init.omega0 * integ.time();
            for (double th : e.theta) worst = std::max(worst, std::fabs(std::remainder(th - exact, 2.0 * kPi)));
        }
        r.check(worst <= 1e-10, "aligned N = {}: max |theta - (theta0 + omega0 t)| over [0, 10] = {:.2e} (<= 1e-10)",
                p.n, worst);
    }
    {
        vk::micro::MicroParams p;
        p.n = 1;
        p.L = 20.0;
        p.R = 1.0;
        p.c = 1.0;
        p.alpha2 = p.beta2 = 0.0;
        p.dt = 1e-4;
        const double omega0 = 2.0;
        vk::micro::ParticleEnsemble e(1);
        e.x = {10.0};
        e.y = {10.0};
        e.theta = {0.0};
        e.omega = {omega0};
        vk::micro::MicroIntegrator integ(p);
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        const auto steps = static_cast<int>(std::llround(2.0 * kPi / omega0 / p.dt)) + 1;
        for (int s = 0; s < steps; ++s) {
            integ.step(e);
            xmin = std::min(xmin, e.x[0]);
            xmax = std::max(xmax, e.x[0]);
            ymin = std::min(ymin, e.y[0]);
            ymax = std::max(ymax, e.y[0]);
        }
        const double exact = p.c / omega0;
        const double rx = 0.5 * (xmax - xmin);
        const double ry = 0.5 * (ymax - ymin);
        const double err = std::max(std::fabs(rx - exact), std::fabs(ry - exact));
        r.check(err <= 1e-3, "single particle: radius {:.6f} / {:.6f} vs c/|omega0| = {} (error {:.2e} <= 1e-3)", rx,
                ry, exact, err);
    }
    const double s = seconds_since(t0);
    r.check(s < 10.0, "runtime {:.2f} s (< 10 s)", s);
    return r;
}

// ---------------------------------------------------------------------------

Report neighbor_search_equivalence() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t n : {100u, 500u, 2000u}) {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            vk::micro::MicroParams p;
            p.n = n;
            p.L = 20.0;
            p.R = 1.5;
            p.seed = seed;
            const auto e = vk::micro::make_initial_ensemble(p, {});
            const auto fast = vk::micro::local_means(e, p);
            const auto slow = oracle::brute_force_local_means(e, p);
            for (std::size_t i = 0; i < n; ++i) {
                worst = std::max({worst, std::fabs(fast.jx[i] - slow.jx[i]), std::fabs(fast.jy[i] - slow.jy[i]),
                                  std::fabs(fast.omega_bar[i] - slow.omega_bar[i]),
                                  std::fabs(fast.weight[i] - slow.weight[i])});
            }
        }
        r.check(worst <= 1e-13, "N = {}, 10 seeds: max |cell list - all pairs| = {:.2e} (<= 1e-13)", n, worst);
    }
    const double s = seconds_since(t0);
    r.check(s < 30.0, "runtime {:.2f} s (< 30 s)", s);
    return r;
}

// ---------------------------------------------------------------------------

Report macro_special_solutions() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    vk::NullSink sink;
    {
        auto p = vk::macro::MacroParams::for_kappa(8.0);
        p.nx = p.ny = 16;
        p.dt = 0.01;
        const double omega0 = 0.5;
        const double period = 2.0 * kPi / omega0;
        p.t_end = 3.0 * period;
        vk::macro::MacroInitSpec init;
        init.kind = vk::macro::MacroInitKind::constant;
        init.omega0 = omega0;
        init.theta0 = 0.4;
        vk::macro::MacroSchedule sched;
        sched.diag_every = 0.05;
        const auto run = vk::macro::run_macro(p, init, sink, sched);
        vk::diag::PeriodOptions opts;
        opts.min_periods = 2.0;
        const auto est = vk::diag::detect_period(run.series, opts);
        const double rel = est ? std::fabs(est->period / period - 1.0) : 1.0;
        r.check(est && rel <= 0.005, "(a) constant data: period {:.6f} vs 2 pi/|omega0| = {:.6f} (rel {:.2e} <= 0.5%)",
                est ? est->period : 0.0, period, rel);
    }
    {
        auto p = vk::macro::MacroParams::for_kappa(4.0);
        p.nx = p.ny = 12;
        p.dt = 0.01;
        p.t_end = 1e5 * p.dt;
        vk::macro::MacroInitSpec init;
        init.rho_amplitude = 0.3;
        init.omega_amplitude = 0.5;
        init.seed = 5;
        vk::macro::MacroSchedule sched;
        sched.diag_every = 10.0;
        const auto run = vk::macro::run_macro(p, init, sink, sched);
        r.check(run.steps == 100000 && run.max_mass_drift <= 1e-12 && run.max_momentum_drift <= 1e-12,
                "(b) {} steps: max relative drift mass {:.2e}, angular momentum {:.2e} (<= 1e-12)", run.steps,
                run.max_mass_drift, run.max_momentum_drift);
        r.check(run.max_direction_defect <= 1e-12, "(c) max ||Omega| - 1| after each step = {:.2e} (<= 1e-12)",
                run.max_direction_defect);
    }
    {
        auto p = vk::macro::MacroParams::for_kappa(8.0);
        p.nx = 200;
        p.ny = 8;  // the datum is uniform in y
        p.L = 2.0 * kPi;
        p.dt = 0.001;
        p.t_end = 1.0;
        vk::macro::MacroInitSpec init;
        init.kind = vk::macro::MacroInitKind::well_prepared;
        init.theta0 = kPi / 4.0;
        auto s = vk::macro::make_initial_state(p, init);
        double worst = 0.0;
        for (std::uint64_t k = 0; k < p.steps(); ++k) {
            vk::macro::full_step(s, p);
            for (std::size_t c = 0; c < s.cells(); ++c) {
                worst = std::max(worst, std::fabs(std::remainder(std::atan2(s.my[c], s.mx[c]) - init.theta0, 2.0 * kPi)));
            }
        }
        r.check(worst <= 0.05, "(d) well-prepared datum, nx = 200, t <= 1: max |angle(Omega) - theta0| = {:.2e} rad (<= 0.05)",
                worst);
    }
    const double s = seconds_since(t0);
    r.check(s < 300.0, "runtime {:.1f} s (< 5 min)", s);
    return r;
}

// ---------------------------------------------------------------------------

Report roe_flux_consistency() {
    Report r;
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> rho(0.2, 3.0), ang(-kPi, kPi), om(-2.0, 2.0), kap(0.5, 8.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto c = vk::coeffs::compute_closure(kap(gen));
        const vk::macro::FluxCoeffs k{c.c1, c.c2, 1.0 / c.kappa};
        const double rr = rho(gen);
        const double a = ang(gen);
        const vk::macro::Cons u{rr, rr * om(gen), rr * std::cos(a), rr * std::sin(a)};
        const auto roe = vk::macro::roe_matrix(u, u, k);
        const auto fd = oracle::fd_jacobian(u, k, 1e-5);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) worst = std::max(worst, std::fabs(roe[i][j] - fd[i][j]));
    }
    r.check(worst <= 1e-6, "100 random states: max |Roe matrix - FD Jacobian| = {:.2e} (<= 1e-6)", worst);

    auto p = vk::macro::MacroParams::for_kappa(8.0);
    p.coeffs.c2 = 0.0;
    p.pressure_coef = 0.0;
    p.nx = 200;
    p.ny = 1;
    p.L = 1.0;
    p.t_end = p.L / p.coeffs.c1;
    p.dt = p.t_end / std::ceil(p.t_end / 2e-4);
    vk::macro::MacroInitSpec init;
    init.kind = vk::macro::MacroInitKind::bump;
    init.omega0 = 0.0;
    init.theta0 = 0.0;
    init.bump_width = 0.1;
    const auto s0 = vk::macro::make_initial_state(p, init);
    vk::NullSink sink;
    const auto run = vk::macro::run_macro(p, s0, sink);
    double err = 0.0, norm = 0.0;
    for (std::size_t c = 0; c < s0.cells(); ++c) {
        err += std::fabs(run.final_state.rho[c] - s0.rho[c]);
        norm += std::fabs(s0.rho[c]);
    }
    r.check(err / norm <= 0.02, "bump advection (c2 = lambda = 0), nx = 200, one traversal: relative L1 error {:.3e} (<= 2%)",
            err / norm);
    r.note("{} steps at dt = {:.3e}", run.steps, p.dt);
    return r;
}

// ---------------------------------------------------------------------------

Report pattern_reproduction() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        double k_theta;
        double k_omega;
        vk::diag::Pattern expected;
        int needed;
    };
    const std::vector<Case> cases{{71, 71, vk::diag::Pattern::synchronized, 4},
                                  {21, 81, vk::diag::Pattern::traveling_wave, 3},
                                  {1, 1, vk::diag::Pattern::rotating_clusters, 3}};
    for (const auto& c : cases) {
        int hits = 0;
        std::string labels;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            vk::micro::MicroParams p;
            p.n = 5000;
            p.L = 37.0;
            p.R = 2.0;
            p.c = 1.0;
            p.k_theta = c.k_theta;
            p.k_omega = c.k_omega;
            p.alpha2 = p.beta2 = 0.125;
            p.dt = 0.01;
            p.t_end = 200.0;
            p.seed = seed;
            p.allow_stiff = true;
            vk::NullSink sink;
            vk::micro::RunSchedule sched;
            sched.diag_every = 0.1;
            const auto run = vk::micro::run_micro(p, {}, sink, sched);
            const auto cls = vk::diag::classify_pattern(run.series, run.window_fields);
            const auto& m = cls.metrics;
            if (cls.label == c.expected) ++hits;
            r.note("k = ({}, {}) seed {}: {} (P = {:.3f}, density variance = {:.3f}, wave = {:.3f}, rotation = {:.3f}, period = {})",
                   c.k_theta, c.k_omega, seed, vk::diag::to_string(cls.label), m.polar_order, m.density_variance,
                   m.wave_energy_fraction, m.cluster_rotation,
                   m.period ? fmt::format("{:.3f}", m.period->period) : std::string("none"));
        }
        r.check(hits >= c.needed, "k = ({}, {}): {}/5 runs classified {} (need >= {})", c.k_theta, c.k_omega, hits,
                vk::diag::to_string(c.expected), c.needed);
    }
    const double s = seconds_since(t0);
    r.check(s < 1800.0, "runtime {:.0f} s (< 30 min)", s);
    return r;
}

// ---------------------------------------------------------------------------

Report micro_macro_consistency() {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();

    vk::micro::MicroParams mp;
    mp.n = 20000;
    mp.L = 1.0;
    mp.R = 0.04;
    mp.c = 0.1;
    mp.k_theta = mp.k_omega = 1.0 / mp.R;
    mp.alpha2 = mp.beta2 = 0.125 / mp.R;
    mp.dt = 0.01;
    mp.t_end = 100.0;
    mp.seed = 1;
    vk::NullSink sink;
    vk::micro::RunSchedule ms;
    ms.diag_every = 0.1;
    const auto micro = vk::micro::run_micro(mp, {}, sink, ms);
    const auto mcls = vk::diag::classify_pattern(micro.series, micro.window_fields);
    const double kappa = mp.k_theta / mp.alpha2;

    // Macro initial data with the particle run's initial means.
    const auto e0 = vk::micro::make_initial_ensemble(mp, {});
    auto p = vk::macro::MacroParams::for_kappa(kappa);
    p.nx = p.ny = 64;
    p.L = 1.0;
    p.dt = 0.005;
    p.t_end = mp.t_end;
    vk::macro::MacroInitSpec init;
    init.kind = vk::macro::MacroInitKind::random;
    init.rho0 = 1.0;
    init.omega0 = vk::diag::mean_omega(e0);
    init.rho_amplitude = 0.1;
    init.omega_amplitude = 1.0;
    init.seed = 1;
    vk::macro::MacroSchedule sched;
    sched.diag_every = 0.1;
    const auto macro = vk::macro::run_macro(p, init, sink, sched);
    const auto Mcls = vk::diag::classify_pattern(macro.series, macro.window_fields);

    auto describe = [](const vk::diag::Classification& c) {
        const auto& m = c.metrics;
        return fmt::format("{} (P = {:.3f}, density variance = {:.3f}, period = {})", vk::diag::to_string(c.label),
                           m.polar_order, m.density_variance,
                           m.period ? fmt::format("{:.4f}", m.period->period) : std::string("none"));
    };
    r.note("kappa = k_theta / alpha2 = {}, initial mean omega = {:.4f}", kappa, init.omega0);
    r.check(mcls.label == vk::diag::Pattern::synchronized, "micro N = {}, R = {}: {}", mp.n, mp.R, describe(mcls));
    r.check(Mcls.label == vk::diag::Pattern::synchronized, "macro {}x{}: {}", p.nx, p.ny, describe(Mcls));
    if (mcls.metrics.period && Mcls.metrics.period) {
        const double a = mcls.metrics.period->period;
        const double b = Mcls.metrics.period->period;
        const double rel = std::fabs(a - b) / b;
        r.check(rel <= 0.15, "periods micro {:.4f} vs macro {:.4f}: relative difference {:.3f} (<= 0.15)", a, b, rel);
    } else {
        r.check(false, "rotation period missing in at least one run");
    }
    r.note("runtime {:.0f} s", seconds_since(t0));
    return r;
}

const std::map<std::string, std::function<Report()>>& criteria() {
    static const std::map<std::string, std::function<Report()>> m{
        {"coefficient_oracles", coefficient_oracles},
        {"exact_micro_solution", exact_micro_solution},
        {"neighbor_search_equivalence", neighbor_search_equivalence},
        {"macro_special_solutions", macro_special_solutions},
        {"roe_flux_consistency", roe_flux_consistency},
        {"pattern_reproduction", pattern_reproduction},
        {"micro_macro_consistency", micro_macro_consistency},
    };
    return m;
}

bool run_one(const std::string& name, const std::function<Report()>& fn) {
    Report r;
    try {
        r = fn();
    } catch (const std::exception& e) {
        r.check(false, "exception: {}", e.what());
    }
    std::printf("%s %s\n", r.ok ? "PASS" : "FAIL", name.c_str());
    for (const auto& l : r.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
    return r.ok;
}

}  // namespace

int main(int argc, char** argv) {
    const auto& all = criteria();
    if (argc > 1) {
        const auto it = all.find(argv[1]);
        if (it == all.end()) {
            std::fprintf(stderr, "unknown criterion '%s'; known:", argv[1]);
            for (const auto& [name, fn] : all) std::fprintf(stderr, " %s", name.c_str());
            std::fprintf(stderr, "\n");
            return 2;
        }
        return run_one(it->first, it->second) ? 0 : 1;
    }
    bool ok = true;
    for (const char* name : {"coefficient_oracles", "exact_micro_solution", "neighbor_search_equivalence",
                             "macro_special_solutions", "roe_flux_consistency", "pattern_reproduction",
                             "micro_macro_consistency"}) {
        ok = run_one(name, all.at(name)) && ok;
    }
    return ok ? 0 : 1;
}
