// Microbenchmarks for the hot paths: pairing arithmetic, the interpreter,
// the staged realizer, and the deduction engine.
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "wlab/constructions.hpp"
#include "wlab/machine.hpp"
#include "wlab/zoo.hpp"

using namespace wlab;

namespace {

std::string shipped_facts() {
  std::ifstream in(WLAB_FACTS_PATH);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void BM_cantor_roundtrip(benchmark::State& state) {
  nat n = nat(1) << static_cast<unsigned>(state.range(0));
  nat k = n + 17;
  for (auto _ : state) {
    nat m = cantor_pair(n, k);
    auto [a, b] = cantor_unpair(m);
    benchmark::DoNotOptimize(a);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_cantor_roundtrip)->Arg(8)->Arg(64)->Arg(512);

void BM_tuple_project(benchmark::State& state) {
  std::vector<Name> tracks;
  for (int i = 0; i < 8; ++i) tracks.push_back(Name::constant(nat(i)));
  Name t = tuple_names(tracks);
  nat pos = cantor_pair(5, 1000);
  for (auto _ : state) {
    nat v = t(pos);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_tuple_project);

void BM_vm_scan(benchmark::State& state) {
  // Scanner run that walks its track for `range` positions before the hit.
  std::size_t slot = static_cast<std::size_t>(state.range(0));
  Prefix vals(slot, 0);
  vals.push_back(9);
  Name track = tuple_names({Name::from_prefix(std::move(vals), 0)});
  nat code = smn_search(0);
  for (auto _ : state) {
    RunResult r = run(code, 0, track, 1000000);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_vm_scan)->Arg(10)->Arg(100)->Arg(1000);

void BM_coh_backtrack(benchmark::State& state) {
  std::mt19937_64 rng(42);
  CohFamily fam;
  fam.window = static_cast<std::size_t>(state.range(0));
  // Dense rows keep a depth-4 branch viable even in the small window.
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<bool> row;
    for (std::size_t j = 0; j < fam.window; ++j)
      row.push_back(rng() % 100 < 80);
    fam.sets.push_back(std::move(row));
  }
  for (auto _ : state) {
    BacktrackResult res = coh_backtrack(fam, fam.window);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_coh_backtrack)->Arg(50)->Arg(200)->Arg(800);

void BM_zoo_closure(benchmark::State& state) {
  zoo::FactBase base = zoo::parse_facts(shipped_facts());
  for (auto _ : state) {
    zoo::Closure c = zoo::derive_closure(base);
    benchmark::DoNotOptimize(c.facts.size());
  }
}
BENCHMARK(BM_zoo_closure);

void BM_zoo_query(benchmark::State& state) {
  zoo::FactBase base = zoo::parse_facts(shipped_facts());
  zoo::ExprPtr l = zoo::parse_expr("ACC_N");
  zoo::ExprPtr r = zoo::parse_expr("ACC_3");
  for (auto _ : state) {
    zoo::QueryResult qr = zoo::query(base, zoo::Rel::leW, l, r);
    benchmark::DoNotOptimize(qr.verdict);
  }
}
BENCHMARK(BM_zoo_query);

}  // namespace

BENCHMARK_MAIN();
