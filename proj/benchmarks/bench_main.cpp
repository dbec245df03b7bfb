#include <benchmark/benchmark.h>

#include <sstream>

#include "tame/parse.hpp"
#include "tame/qe.hpp"

namespace {

// Alternating quantifier block over a chain of order constraints; size n
// controls the number of eliminated variables.
tame::FormulaPtr chain_formula(int n) {
  std::ostringstream body;
  body << "x < u0";
  for (int i = 0; i + 1 < n; ++i) body << " and u" << i << " < u" << (i + 1);
  body << " and u" << (n - 1) << " < y";
  std::ostringstream f;
  for (int i = 0; i < n; ++i)
    f << (i % 2 ? "forall u" : "exists u") << i << ". ";
  f << "(" << body.str() << ")";
  return tame::parse_formula(f.str());
}

void BM_eliminate_chain(benchmark::State& state) {
  auto f = chain_formula(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto g = tame::eliminate(f);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_eliminate_chain)->Arg(2)->Arg(4)->Arg(6);

void BM_interval_union(benchmark::State& state) {
  std::ostringstream src;
  int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    if (i) src << " or ";
    src << "(" << 2 * i << " < x and x < " << 2 * i + 1 << ")";
  }
  auto f = tame::parse_formula(src.str());
  for (auto _ : state) {
    auto u = tame::to_interval_union(f, "x");
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_interval_union)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
