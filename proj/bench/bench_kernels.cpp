#include <benchmark/benchmark.h>

#include "strebel/constructions.hpp"
#include "strebel/strebel.hpp"

using namespace strebel;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_critical_graph_q1(benchmark::State& st) {
  const QuadDiff w = make_q1();
  for (auto _ : st) benchmark::DoNotOptimize(critical_graph(w, TraceConfig{}, mode(st)));
  label(st);
}

void BM_critical_graph_family(benchmark::State& st) {
  const QuadDiff w = make_four_pole_family(1.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(critical_graph(w, TraceConfig{}, mode(st)));
  label(st);
}

void BM_critical_graph_cover(benchmark::State& st) {
  const QuadDiff w = cover_differential(cover_solver(0.25, Exec::Serial));
  for (auto _ : st) benchmark::DoNotOptimize(critical_graph(w, TraceConfig{}, mode(st)));
  label(st);
}

void BM_cover_solver(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(cover_solver(0.25, 0, mode(st)));
  label(st);
}

}  // namespace

BENCHMARK(BM_critical_graph_q1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_critical_graph_family)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_critical_graph_cover)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_cover_solver)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
