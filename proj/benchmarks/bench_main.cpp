#include <cmath>

#include <benchmark/benchmark.h>

#include "vk/cell_list.hpp"
#include "vk/coefficients.hpp"
#include "vk/macrosim.hpp"
#include "vk/microsim.hpp"

namespace {

// Same particle density as the reference table (15000 on 64 x 64).
vk::micro::MicroParams density_matched(std::size_t n) {
    vk::micro::MicroParams p;
    p.n = n;
    p.L = 64.0 * std::sqrt(static_cast<double>(n) / 15000.0);
    p.R = 2.0;
    p.k_theta = p.k_omega = 40.0;
    p.alpha2 = p.beta2 = 0.125;
    p.dt = 0.01;
    p.seed = 1;
    return p;
}

void BM_CellListBuild(benchmark::State& state) {
    const auto p = density_matched(static_cast<std::size_t>(state.range(0)));
    const auto e = vk::micro::make_initial_ensemble(p, {});
    vk::micro::CellList cells;
    for (auto _ : state) {
        cells.build(e.x, e.y, p.L, p.R);
        benchmark::DoNotOptimize(cells.cell_start().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CellListBuild)->Arg(5000)->Arg(15000)->Arg(50000);

void BM_LocalMeans(benchmark::State& state) {
    const auto p = density_matched(static_cast<std::size_t>(state.range(0)));
    const auto e = vk::micro::make_initial_ensemble(p, {});
    vk::micro::CellList cells;
    vk::micro::LocalMeans lm;
    for (auto _ : state) {
        vk::micro::local_means(e, p, cells, lm);
        benchmark::DoNotOptimize(lm.jx.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LocalMeans)->Arg(5000)->Arg(15000)->Arg(50000);

void BM_EmStep(benchmark::State& state) {
    const auto p = density_matched(static_cast<std::size_t>(state.range(0)));
    const auto e = vk::micro::make_initial_ensemble(p, {});
    const auto lm = vk::micro::local_means(e, p);
    vk::micro::ParticleEnsemble next;
    std::uint64_t step = 0;
    for (auto _ : state) {
        vk::micro::em_step(e, p, lm, step++, next);
        benchmark::DoNotOptimize(next.theta.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmStep)->Arg(5000)->Arg(15000)->Arg(50000);

void BM_MicroStep(benchmark::State& state) {
    const auto p = density_matched(static_cast<std::size_t>(state.range(0)));
    auto e = vk::micro::make_initial_ensemble(p, {});
    vk::micro::MicroIntegrator integ(p);
    for (auto _ : state) integ.step(e);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MicroStep)->Arg(5000)->Arg(15000);

void BM_MacroStep(benchmark::State& state) {
    auto p = vk::macro::MacroParams::for_kappa(8.0);
    p.nx = p.ny = static_cast<int>(state.range(0));
    p.dt = 0.2 / p.nx;
    auto s = vk::macro::make_initial_state(p, {});
    for (auto _ : state) vk::macro::full_step(s, p);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_MacroStep)->Arg(64)->Arg(200);

void BM_Closure(benchmark::State& state) {
    const double kappa = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(vk::coeffs::compute_closure(kappa));
}
BENCHMARK(BM_Closure)->Arg(1)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
