// Serial reference vs OpenMP kernels. Arg(0) is serial, Arg(1) parallel.
#include <benchmark/benchmark.h>

#include "nqv/queens.hpp"
#include "nqv/verify.hpp"

using namespace nqv;

static void BM_BruteForce(benchmark::State& state) {
    const bool par = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(par ? brute_force(8) : brute_force_serial(8));
}
BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ModelCheck(benchmark::State& state) {
    CheckOptions o;
    o.depth = 3;
    o.parallel = state.range(0) != 0;
    const Program p = nqueens_program();
    const SpecSet s = SpecSet::named(SpecName::s);
    for (auto _ : state) benchmark::DoNotOptimize(check_model(p, s, o));
}
BENCHMARK(BM_ModelCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Completeness(benchmark::State& state) {
    CheckOptions o;
    o.depth = 4;
    o.parallel = state.range(0) != 0;
    const Program p = nqueens_program();
    const SpecSet s = SpecSet::named(SpecName::s0);
    s.sample(5000);
    for (auto _ : state) benchmark::DoNotOptimize(check_completeness_condition(p, s, 5000, o));
}
BENCHMARK(BM_Completeness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Lemma4(benchmark::State& state) {
    Lemma4Options o{.instances = 20'000, .parallel = state.range(0) != 0};
    for (auto _ : state) benchmark::DoNotOptimize(lemma4_suite(o));
}
BENCHMARK(BM_Lemma4)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
