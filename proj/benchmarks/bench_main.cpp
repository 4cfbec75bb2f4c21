#include <benchmark/benchmark.h>

#include "kk/fv.hpp"
#include "kk/model.hpp"
#include "kk/viscous.hpp"

namespace {

kk::Field sine_field(const kk::ModelSpec& model, const kk::Grid& grid, double eps) {
  return kk::viscous::initialize(model, grid, kk::SineProfile{1.5, 0.5, 1.0},
                                 kk::SineProfile{1.2, 0.2, 2.0}, eps);
}

void BM_ViscousStep(benchmark::State& state) {
  const auto model = kk::make_gc(1.0, 0.5);
  const kk::Grid grid{0.0, 1.0, static_cast<int>(state.range(0))};
  kk::viscous::ViscousConfig cfg;
  cfg.epsilon = 1e-3;
  const kk::Field f = sine_field(model, grid, cfg.epsilon);
  const double dt = kk::viscous::stable_dt(model, grid, f, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(kk::viscous::step(model, grid, f, cfg, dt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ViscousStep)->Arg(256)->Arg(1024)->Arg(4096);

void BM_FiniteVolumeSnapshot(benchmark::State& state) {
  const auto model = kk::make_gc(1.0, 0.5, {kk::SourceKind::exit, 0.1});
  const kk::Grid grid{0.0, 1.0, static_cast<int>(state.range(0))};
  kk::fv::FVConfig cfg;
  cfg.t_end = 0.01;
  cfg.n_snapshots = 1;
  const kk::Field f = sine_field(model, grid, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(kk::fv::solve(model, grid, f, cfg));
}
BENCHMARK(BM_FiniteVolumeSnapshot)->Arg(256)->Arg(1024);

void BM_Audit(benchmark::State& state) {
  const auto model = kk::make_gc(1.0, 0.5, {kk::SourceKind::exit, 0.1});
  const kk::SamplingPlan plan{static_cast<std::size_t>(state.range(0)), true};
  for (auto _ : state) benchmark::DoNotOptimize(kk::audit_conditions(model, plan, 1.0));
}
BENCHMARK(BM_Audit)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
