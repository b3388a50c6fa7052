#include <benchmark/benchmark.h>

#include "ilslab/cheeger.hpp"
#include "ilslab/instance.hpp"

using namespace ilslab;

static void BM_CheegerEnergy(benchmark::State& state) {
  const Instance inst = generate_instance({3, 1, static_cast<std::size_t>(state.range(0)), 3});
  const Section& phi = inst.section("phi");
  for (auto _ : state) {
    benchmark::DoNotOptimize(cheeger_energy(phi, inst.schedule[0], EnergyVariant::a));
  }
}
BENCHMARK(BM_CheegerEnergy)->Arg(10)->Arg(20)->Arg(40);

static void BM_RelaxEnergy(benchmark::State& state) {
  const Instance inst = generate_instance({3, 1, static_cast<std::size_t>(state.range(0)), 4});
  const Section& phi = inst.section("phi");
  RelaxationParams params;
  params.eps = inst.schedule[0];
  params.restarts = 2;
  params.stages = 2;
  params.max_iters = 300;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relax_energy(phi, inst.cls, params, EnergyVariant::a).energy);
  }
}
BENCHMARK(BM_RelaxEnergy)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
