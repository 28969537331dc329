#include <benchmark/benchmark.h>

#include "finsler/catalog.hpp"
#include "finsler/douglas.hpp"
#include "finsler/sampler.hpp"

using namespace finsler;

static void BM_DouglasGeneric(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CatalogEntry e = catalog("example2");
    const RiemannChart chart = e.chart.make(n);
    const Sample smp = PointSampler(chart, e.b0, 1).draw(1).front();
    const ChartPoint p = evaluate_chart(chart, smp.x);
    for (auto _ : state) benchmark::DoNotOptimize(douglas_generic(p, *e.closed, smp.y));
}
BENCHMARK(BM_DouglasGeneric)->DenseRange(2, 5);

static void BM_DouglasClosedForm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CatalogEntry e = catalog("example2");
    const RiemannChart chart = euclidean_chart(n);
    const Sample smp = PointSampler(chart, e.b0, 1).draw(1).front();
    for (auto _ : state) benchmark::DoNotOptimize(douglas_closed_form(chart, *e.closed, smp.x, smp.y));
}
BENCHMARK(BM_DouglasClosedForm)->DenseRange(2, 5);
