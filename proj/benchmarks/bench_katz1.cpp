#include <benchmark/benchmark.h>

#include <random>

#include "katz1/fq_poly.hpp"
#include "katz1/galois_forms.hpp"
#include "katz1/hecke_algebra.hpp"
#include "katz1/int_matrix.hpp"
#include "katz1/modular_symbols.hpp"
#include "katz1/weight_one.hpp"

using namespace katz1;

static void BM_Hnf(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> d(-50, 50);
    size_t n = static_cast<size_t>(state.range(0));
    IntMatrix M(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) M.at(i, j) = d(rng);
    for (auto _ : state) benchmark::DoNotOptimize(hnf(M, false));
}
BENCHMARK(BM_Hnf)->Arg(10)->Arg(30)->Arg(60);

static void BM_FactorPoly(benchmark::State& state)
{
    auto F = FiniteField::make(2);
    std::mt19937_64 rng(2);
    std::vector<FiniteField::Elt> c(static_cast<size_t>(state.range(0)) + 1);
    for (auto& x : c) x = rng() & 1;
    c.back() = 1;
    FqPoly f(F, c);
    for (auto _ : state) benchmark::DoNotOptimize(factor_poly(f));
}
BENCHMARK(BM_FactorPoly)->Arg(32)->Arg(128);

static void BM_ModularSymbols(benchmark::State& state)
{
    int64_t N = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(ModularSymbolSpace::build(N, 2, DirichletCharacter::trivial(N)));
}
BENCHMARK(BM_ModularSymbols)->Arg(491)->Arg(1429)->Unit(benchmark::kMillisecond);

static void BM_ModPAlgebra(benchmark::State& state)
{
    int64_t N = state.range(0);
    auto S = ModularSymbolSpace::build(N, 2, DirichletCharacter::trivial(N));
    int64_t bound = generation_bound(N, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ModPHeckeAlgebra::build(S, 2, bound));
}
BENCHMARK(BM_ModPAlgebra)->Arg(491)->Arg(1429)->Unit(benchmark::kMillisecond);

static void BM_WeightOne(benchmark::State& state)
{
    int64_t N = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(WeightOneModule::build(N, 2, DirichletCharacter::trivial(N)));
}
BENCHMARK(BM_WeightOne)->Arg(229)->Arg(491)->Arg(1429)->Unit(benchmark::kMillisecond);

static void BM_ClassGroup(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(class_group(state.range(0)));
}
BENCHMARK(BM_ClassGroup)->Arg(-491)->Arg(1429)->Arg(-99991);

static void BM_DihedralPredictions(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(dihedral_predictions(state.range(0), 2));
}
BENCHMARK(BM_DihedralPredictions)->Arg(491)->Arg(2089)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
