// Parallel kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include "affdim/config.hpp"
#include "affdim/ergodic.hpp"
#include "affdim/estimators.hpp"
#include "affdim/hochman.hpp"
#include "affdim/pressure.hpp"
#include "affdim/reference.hpp"

using namespace affdim;

namespace {

const SystemConfig& phi_quarter() {
  static const SystemConfig cfg = builtin_example("phi-c", {{"c", "1/4"}});
  return cfg;
}

void BM_pressure(benchmark::State& st) {
  const auto mats = phi_quarter().system.linear_parts();
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(pressure_n(mats, 1.5, n));
}
BENCHMARK(BM_pressure)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_pressure_reference(benchmark::State& st) {
  const auto mats = phi_quarter().system.linear_parts();
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference::pressure_n(mats, 1.5, n));
}
BENCHMARK(BM_pressure_reference)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_lyapunov(benchmark::State& st) {
  const auto& sys = phi_quarter().system;
  const auto w = BernoulliWeights::uniform(sys.size());
  for (auto _ : st) benchmark::DoNotOptimize(lyapunov_monte_carlo(sys, w, 1000, 1000, 1));
}
BENCHMARK(BM_lyapunov)->Unit(benchmark::kMillisecond);

void BM_lyapunov_reference(benchmark::State& st) {
  const auto& sys = phi_quarter().system;
  const auto w = BernoulliWeights::uniform(sys.size());
  for (auto _ : st) benchmark::DoNotOptimize(reference::lyapunov_monte_carlo(sys, w, 1000, 1000, 1));
}
BENCHMARK(BM_lyapunov_reference)->Unit(benchmark::kMillisecond);

void BM_delta(benchmark::State& st) {
  const LineIfs ifs = parse_line_ifs("1/3,0;1/3,1/3;1/3,2/3;1/3,1/7");
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(delta_n(ifs, n, true));
}
BENCHMARK(BM_delta)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_delta_reference(benchmark::State& st) {
  const LineIfs ifs = parse_line_ifs("1/3,0;1/3,1/3;1/3,2/3;1/3,1/7");
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference::delta_n_pairwise(*ifs.exact(), n));
}
BENCHMARK(BM_delta_reference)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
