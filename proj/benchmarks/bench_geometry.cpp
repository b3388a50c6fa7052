#include <benchmark/benchmark.h>

#include "ilslab/functionals.hpp"
#include "ilslab/instance.hpp"

using namespace ilslab;

static void BM_FiberDistance(benchmark::State& state) {
  const std::size_t s = static_cast<std::size_t>(state.range(0));
  const Instance inst = generate_instance({s, s - 1, 8, 1});
  const Section& phi = inst.section("phi");
  const QuotientMap& q = *inst.quotient;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fiber_distance(q, phi.value(0), inst.base->point(1), 1.0));
  }
}
BENCHMARK(BM_FiberDistance)->Arg(2)->Arg(4)->Arg(8);

static void BM_SlopeField(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Instance inst = generate_instance({3, 1, n, 2});
  const Section& phi = inst.section("phi");
  for (auto _ : state) {
    benchmark::DoNotOptimize(slope_field(phi, inst.schedule, SlopeVariant::asymptotic));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_SlopeField)->RangeMultiplier(2)->Range(8, 64)->Complexity();
