#include <benchmark/benchmark.h>

#include "finsler/catalog.hpp"
#include "finsler/solutions.hpp"

using namespace finsler;

static void BM_PhiFromSpec(benchmark::State& state) {
    const CatalogEntry e = catalog("example3");
    for (auto _ : state) benchmark::DoNotOptimize(phi_from_spec(e.spec, 0.3, 0.2));
}
BENCHMARK(BM_PhiFromSpec);

static void BM_PhiJet(benchmark::State& state) {
    const int ov = static_cast<int>(state.range(0));
    const CatalogEntry e = catalog("example6");
    for (auto _ : state) benchmark::DoNotOptimize(phi_jet(e.spec, 0.3, 0.2, 1, ov));
}
BENCHMARK(BM_PhiJet)->Arg(2)->Arg(4)->Arg(6);
