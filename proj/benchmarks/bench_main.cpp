#include <benchmark/benchmark.h>

#include <memory>

#include "lp/function_base.hpp"
#include "lp/metrics.hpp"
#include "lp/planner.hpp"
#include "lp/retriever.hpp"

namespace {

struct Fixture {
  lp::FunctionBase base = lp::build_default_base();
  std::shared_ptr<lp::HashingEmbedder> embedder =
      std::make_shared<lp::HashingEmbedder>();
  lp::Retriever retriever{base, embedder};
  lp::Planner planner{base, retriever};
};

Fixture& fixture() {
  static Fixture fx;
  return fx;
}

void BM_LegalMoves(benchmark::State& state) {
  lp::GameState s;
  s.pursuers = {{10, 10}, {0, 0}, {20, 20}};
  s.evader = {5, 5};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lp::enumerate_legal_moves(s, lp::AgentId::pursuer(0)));
}
BENCHMARK(BM_LegalMoves);

void BM_Embed(benchmark::State& state) {
  lp::HashingEmbedder emb;
  for (auto _ : state)
    benchmark::DoNotOptimize(emb.embed(
        "enumerate the valid candidate moves reachable within the movement "
        "budget for each pursuer inside the board bounds"));
}
BENCHMARK(BM_Embed);

void BM_TopK(benchmark::State& state) {
  Fixture& fx = fixture();
  lp::RetrievalQuery q;
  q.instructions = "select the best move for each pursuer";
  for (auto _ : state) benchmark::DoNotOptimize(fx.retriever.top_k(q, 5));
}
BENCHMARK(BM_TopK);

void BM_OracleEpisode(benchmark::State& state) {
  Fixture& fx = fixture();
  lp::TaskSpec task = lp::default_task(lp::BoardConfig{});
  lp::OraclePolicy oracle;
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(fx.planner.run_episode(task, oracle, seed++));
}
BENCHMARK(BM_OracleEpisode);

void BM_EmergencyEpisode(benchmark::State& state) {
  Fixture& fx = fixture();
  lp::TaskSpec task = lp::default_task(lp::BoardConfig{}, true);
  lp::OraclePolicy oracle;
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(fx.planner.run_episode(task, oracle, seed++));
}
BENCHMARK(BM_EmergencyEpisode);

}  // namespace

BENCHMARK_MAIN();
