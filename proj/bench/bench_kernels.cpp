// Serial reference kernels against the OpenMP and sweep versions.

#include <benchmark/benchmark.h>

#include <map>

#include "fcmp/bootstrap.hpp"
#include "fcmp/engine.hpp"
#include "fcmp/kernels.hpp"
#include "fcmp/simulate.hpp"

using namespace fcmp;

namespace {

struct Fixture {
  ForecastPanel panel;
  ThetaGrid grid;
};

const Fixture& fixture(std::size_t tp) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(tp);
  if (it == cache.end()) {
    ScenarioSpec s;
    s.design = Design::MseVsBregman;
    s.setting = 1;
    s.tp = tp;
    s.seed = 1;
    auto panel = generate_scenario(s);
    auto grid = build_theta_grid(panel, default_pairs(panel, 0), GridSpec::all());
    it = cache.emplace(tp, Fixture{std::move(panel), std::move(grid)}).first;
  }
  return it->second;
}

void BM_CurveReference(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::mean_curve_reference(Functional::Expectile, FunctionalLevel(0.5),
                                                           f.panel.forecast(0), f.panel.realized(), f.grid.points));
}

void BM_CurveDirectOmp(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::mean_curve_direct_omp(Functional::Expectile, FunctionalLevel(0.5),
                                                            f.panel.forecast(0), f.panel.realized(), f.grid.points));
}

void BM_CurveSweep(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  const kernels::CurveEvaluator ev(f.panel, Functional::Expectile, FunctionalLevel(0.5), f.grid.points);
  kernels::Workspace ws;
  std::vector<double> out(f.grid.size());
  for (auto _ : st) {
    ev.mean_curve(0, out, ws);
    benchmark::DoNotOptimize(out.data());
  }
}

void bootstrap(benchmark::State& st, Exec exec) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  BootstrapConfig cfg;
  cfg.M = 100;
  cfg.seed = 2;
  const auto pairs = default_pairs(f.panel, 0);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        recentered_bootstrap_test(f.panel, pairs, Functional::Expectile, FunctionalLevel(0.5), f.grid, cfg, exec));
}

void BM_BootstrapSerial(benchmark::State& st) { bootstrap(st, Exec::Serial); }
void BM_BootstrapParallel(benchmark::State& st) { bootstrap(st, Exec::Parallel); }

}  // namespace

BENCHMARK(BM_CurveReference)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveDirectOmp)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveSweep)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
