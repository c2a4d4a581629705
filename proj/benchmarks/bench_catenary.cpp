#include <sstream>

#include <benchmark/benchmark.h>

#include "catenary/classify.hpp"
#include "catenary/conservation.hpp"
#include "catenary/dynamics.hpp"
#include "catenary/io.hpp"
#include "catenary/variation.hpp"

using namespace catenary;

namespace {

void BM_IntegratePeriodic(benchmark::State& state) {
  const PowerParams p(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(p, 0.25));
}
BENCHMARK(BM_IntegratePeriodic)->Unit(benchmark::kMillisecond);

void BM_IntegrateBlowup(benchmark::State& state) {
  const PowerParams p(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(p, 2.0));
}
BENCHMARK(BM_IntegrateBlowup)->Unit(benchmark::kMillisecond);

void BM_IntegrateUnitHit(benchmark::State& state) {
  const PowerParams p(-3.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(p, 2.0));
}
BENCHMARK(BM_IntegrateUnitHit)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const PowerParams p(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(classify(p, 0.25));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_MidpointResidual(benchmark::State& state) {
  const Trajectory t = integrate(PowerParams(1.0), 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(midpoint_el_residuals(t));
}
BENCHMARK(BM_MidpointResidual)->Unit(benchmark::kMicrosecond);

void BM_GPolynomial(benchmark::State& state) {
  const int a = -static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(g_polynomial(a));
}
BENCHMARK(BM_GPolynomial)->Arg(2)->Arg(6)->Arg(12);

void BM_DomainBoundQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(domain_bound_quadrature(2, 2.0));
}
BENCHMARK(BM_DomainBoundQuadrature)->Unit(benchmark::kMicrosecond);

void BM_StationarityDefect(benchmark::State& state) {
  const PowerParams p(1.0);
  const Trajectory t = integrate(p, 0.25);
  const double T = period(t);
  const BumpBasis basis = BumpBasis::centred(-T / 2, T / 2);
  for (auto _ : state) benchmark::DoNotOptimize(stationarity_defect(p, t, basis, 1e-4));
}
BENCHMARK(BM_StationarityDefect)->Unit(benchmark::kMillisecond);

void BM_CsvWrite(benchmark::State& state) {
  const Trajectory t = integrate(PowerParams(1.0), 0.25);
  for (auto _ : state) {
    std::ostringstream out;
    write_trajectory_csv(out, t);
    benchmark::DoNotOptimize(out.str());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.samples.size()));
}
BENCHMARK(BM_CsvWrite)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
