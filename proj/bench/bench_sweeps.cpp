#include <benchmark/benchmark.h>

#include "mcloss/hinge.hpp"
#include "mcloss/mesh.hpp"
#include "mcloss/suites.hpp"

using namespace mcloss;

namespace {

void run(benchmark::State& state, const char* suite, Execution exec) {
  SuiteConfig c;
  c.suite = suite;
  c.m = static_cast<std::size_t>(state.range(0));
  c.samples = 20000;
  c.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(c));
  state.counters["threads"] = exec == Execution::Parallel ? parallel_threads() : 1;
}

void BM_HingeOrderSerial(benchmark::State& s) { run(s, "hinge-order", Execution::Serial); }
void BM_HingeOrderParallel(benchmark::State& s) { run(s, "hinge-order", Execution::Parallel); }
void BM_PinskerSerial(benchmark::State& s) { run(s, "pinsker", Execution::Serial); }
void BM_PinskerParallel(benchmark::State& s) { run(s, "pinsker", Execution::Parallel); }

std::vector<Vec> taus(std::size_t dim) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < 4096; ++i) {
    Rng rng = stream_rng(5, i);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Vec t(dim);
    for (double& x : t) x = u(rng);
    out.push_back(std::move(t));
  }
  return out;
}

void BM_Zo4All(benchmark::State& state) {
  const auto ts = taus(static_cast<std::size_t>(state.range(0)) - 1);
  for (auto _ : state) {
    for (const Vec& t : ts) benchmark::DoNotOptimize(zo4_all(t));
  }
}

void BM_Zo4AllReference(benchmark::State& state) {
  const auto ts = taus(static_cast<std::size_t>(state.range(0)) - 1);
  for (auto _ : state) {
    for (const Vec& t : ts) benchmark::DoNotOptimize(zo4_all_reference(t));
  }
}

}  // namespace

BENCHMARK(BM_HingeOrderSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HingeOrderParallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinskerSerial)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinskerParallel)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Zo4All)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Zo4AllReference)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
