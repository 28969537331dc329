#include <benchmark/benchmark.h>

#include "finsler/expr.hpp"
#include "finsler/jet2.hpp"

using namespace finsler;
using namespace finsler::expr;

static void BM_JetProduct(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Jet2 u = Jet2::variable_u(0.3, k, k);
    const Jet2 v = Jet2::variable_v(0.2, k, k);
    const Jet2 a = exp(u * v) + u;
    for (auto _ : state) benchmark::DoNotOptimize(a * (a + v));
}
BENCHMARK(BM_JetProduct)->DenseRange(2, 8, 2);

static void BM_JetTranscendental(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Jet2 u = Jet2::variable_u(0.3, k, k);
    const Jet2 v = Jet2::variable_v(0.2, k, k);
    for (auto _ : state) benchmark::DoNotOptimize(sqrt(1.0 + u + v * v) * log(2.0 + u * v));
}
BENCHMARK(BM_JetTranscendental)->DenseRange(2, 8, 2);

static void BM_ExprJet(benchmark::State& state) {
    const Expr e = parse_t("sqrt(1 + t) * exp(-t/2) + t^3");
    const Jet2 t = Jet2::variable_u(0.4, 6, 0);
    for (auto _ : state) benchmark::DoNotOptimize(eval_expr(e, t));
}
BENCHMARK(BM_ExprJet);
