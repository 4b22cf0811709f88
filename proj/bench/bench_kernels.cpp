// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "nqrw/amalgam.hpp"
#include "nqrw/codescent.hpp"
#include "nqrw/confluence.hpp"

using namespace nqrw;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

FiniteAlgebra cyclic(std::size_t m) {
  std::vector<std::string> carrier;
  for (std::size_t a = 0; a < m; ++a) carrier.push_back(std::to_string(a));
  return make_algebra("Z" + std::to_string(m), VarietyKind::loop, 2, carrier, [m](std::span<const Element> a) {
    return static_cast<Element>((a[0] + a[1]) % m);
  });
}

void BM_JoinPairs(benchmark::State& state) {
  Trs trs = generate_trs({VarietyKind::loop, 4, true});
  auto pairs = critical_pairs(trs);
  for (auto _ : state) benchmark::DoNotOptimize(join_pairs(trs.rules(), pairs, kDefaultReductCap, exec_of(state)));
  state.counters["pairs"] = static_cast<double>(pairs.size());
  label(state);
}

void BM_EnumerateCongruences(benchmark::State& state) {
  FiniteAlgebra z8 = cyclic(8);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_congruences(z8, Scope::full, exec_of(state)));
  label(state);
}

void BM_UniqueNormalForms(benchmark::State& state) {
  FiniteAlgebra z2 = cyclic(2), z4 = cyclic(4);
  AmalgamDiagram d = build_amalgam(z2, {z4, z4}, {{0, 2}, {0, 2}});
  UnfOptions opts;
  opts.max_size = 4;
  opts.trials = 200;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_unique_normal_forms(d, opts));
  label(state);
}

void BM_CepSearch(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(search_cep_failure(4, Scope::full, exec_of(state)));
  label(state);
}

void BM_Prop36(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_prop_3_6(6, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_JoinPairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateCongruences)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UniqueNormalForms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CepSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Prop36)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
