#include <benchmark/benchmark.h>

#include <vector>

#include "unanimity/mechanisms.hpp"
#include "unanimity/oracle.hpp"
#include "unanimity/sim.hpp"

namespace {

using namespace unanimity;

// Baseline-model problems with n children and n homes.
std::vector<sim::Replication> problems(std::size_t n, std::size_t count = 64) {
  sim::SimConfig cfg;
  cfg.children = {n, n};
  cfg.homes = {n, n};
  cfg.seed = 42;
  std::vector<sim::Replication> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sim::generate(cfg, i));
  return out;
}

template <class F>
void over_problems(benchmark::State& state, F f) {
  const auto ps = problems(static_cast<std::size_t>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = ps[i++ % ps.size()].problem;
    benchmark::DoNotOptimize(f(p, identity_order(p.market())));
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_Sd(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder& o) { return sd(p, o); });
}
void BM_Sdi(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder& o) { return sdi(p, o, TieBreakPolicy::kByHomeId); });
}
void BM_Asdi(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder& o) { return asdi(p, o, TieBreakPolicy::kByHomeId); });
}
void BM_Uttc(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder& o) {
    return uttc(p, sdi(p, o, TieBreakPolicy::kByHomeId), {PointingOrder::kEvaluation, false});
  });
}

BENCHMARK(BM_Sd)->Arg(5)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_Sdi)->Arg(5)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_Asdi)->Arg(5)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_Uttc)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_OracleIsUnanimous(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder& o) { return oracle::is_unanimous(p, sdi(p, o)); });
}
void BM_OracleUnanimousSet(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder&) { return oracle::unanimous_matchings(p).size(); });
}
void BM_OracleUnimprovable(benchmark::State& state) {
  over_problems(state, [](const Problem& p, const DictatorOrder& o) { return oracle::is_unimprovable(p, asdi(p, o)); });
}

BENCHMARK(BM_OracleIsUnanimous)->DenseRange(3, 5);
BENCHMARK(BM_OracleUnanimousSet)->DenseRange(3, 5);
BENCHMARK(BM_OracleUnimprovable)->DenseRange(3, 5);

void BM_SimBatch(benchmark::State& state) {
  sim::SimConfig cfg;
  cfg.n_sims = static_cast<std::uint64_t>(state.range(0));
  cfg.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_batch(cfg, 1).rows);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_SimBatch)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
