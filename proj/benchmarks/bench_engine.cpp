#include "twinbeam/correlators.hpp"
#include "twinbeam/fock_oracle.hpp"
#include "twinbeam/schmidt.hpp"
#include "twinbeam/spectral.hpp"

#include <benchmark/benchmark.h>

namespace {

twinbeam::JointSpectralAmplitude calibrated_jsa(std::size_t points) {
  const twinbeam::PumpEnvelope pump = twinbeam::pump_from_fundamental(796.0, 10.0);
  const twinbeam::PhaseMatching pm{1.45, 1.54, 1.03};
  const auto grid = twinbeam::build_grid(0.0, 0.0, twinbeam::default_span(pump, pm), points);
  return twinbeam::build_jsa(grid, pump, pm);
}

void BM_SchmidtDecompose(benchmark::State& state) {
  const auto jsa = calibrated_jsa(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::schmidt_decompose(jsa));
}
BENCHMARK(BM_SchmidtDecompose)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MomentG12(benchmark::State& state) {
  const auto jsa = calibrated_jsa(static_cast<std::size_t>(state.range(0)));
  const auto corr = twinbeam::build_correlators(twinbeam::schmidt_decompose(jsa), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::wick_normal_moment(corr, 1, 2));
}
BENCHMARK(BM_MomentG12)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MomentOrder5(benchmark::State& state) {
  const auto jsa = calibrated_jsa(128);
  const auto corr = twinbeam::build_correlators(twinbeam::schmidt_decompose(jsa), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::wick_normal_moment(corr, 2, 3));
}
BENCHMARK(BM_MomentOrder5)->Unit(benchmark::kMillisecond);

void BM_FockState(benchmark::State& state) {
  twinbeam::SmallJsa jsa;
  jsa.amplitudes = Eigen::MatrixXcd::Constant(2, 2, 0.5);
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::build_pdc_state(jsa, 0.3, cutoff));
}
BENCHMARK(BM_FockState)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
