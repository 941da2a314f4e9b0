#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <memory>
#include <random>

#include "doctest.h"
#include "lp/metrics.hpp"
#include "lp/planner.hpp"
#include "lp/trace.hpp"

using namespace lp;

namespace {

struct Fixture {
  FunctionBase base = build_default_base();
  std::shared_ptr<HashingEmbedder> embedder =
      std::make_shared<HashingEmbedder>();
  Retriever retriever{base, embedder};
  Planner planner{base, retriever};
};

GameState make_state(std::vector<GridPoint> pursuers, GridPoint evader,
                     BoardConfig cfg = {}) {
  GameState s;
  s.pursuers = std::move(pursuers);
  s.evader = evader;
  s.config = cfg;
  return s;
}

// Always selects the stage-1 function, so stage 3 sees the wrong variant.
struct StuckPolicy : SelectorPolicy {
  std::string name() const override { return "stuck"; }
  std::string select(const RetrievalQuery&,
                     const std::vector<const FunctionSpec*>& candidates,
                     const TaskContext& ctx) override {
    if (ctx.stage < 2.0) {
      for (const FunctionSpec* s : candidates)
        if (s->stage_tag == ctx.stage) return s->name;
    }
    return "compute_distances";
  }
};

}  // namespace

TEST_CASE("execute_stage runs implementations and checks variants") {
  Fixture fx;
  TaskContext ctx{"rules",
                  make_state({{3, 8}, {14, 19}, {17, 2}}, {20, 18})};
  StageValue out =
      execute_stage(fx.base.at("compute_distances"), StageValue(ctx));
  CHECK(std::get<DistanceTable>(out).distances ==
        std::vector<int>{27, 7, 19});

  CHECK_THROWS_WITH_AS(
      execute_stage(fx.base.at("select_best_move"), StageValue(ctx)),
      "select_best_move expects MoveCandidates, got TaskContext",
      std::invalid_argument);
}

TEST_CASE("pipeline through the planner equals direct composition") {
  Fixture fx;
  TaskSpec task = default_task(BoardConfig{});
  OraclePolicy oracle;
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto cell = [&] {
      return GridPoint{static_cast<int>(rng() % 21),
                       static_cast<int>(rng() % 21)};
    };
    GameState s = make_state({cell(), cell(), cell()}, cell());
    if (is_captured(s)) continue;

    EmergencyOverlay overlay;
    auto [next, rec] = fx.planner.run_step(s, task, oracle, overlay);
    auto direct = select_best_move(filter_valid_moves(
        StageValue(compute_distances(TaskContext{task.instructions, s}))));
    CHECK(rec.proposed_moves == direct.moves);
    CHECK(rec.violations == 0);
    CHECK(rec.stages.size() == 3);
    for (const StageRecord& st : rec.stages) {
      CHECK_FALSE(st.selection_fault);
      CHECK(st.candidates.contains(st.selected));
    }
  }
}

TEST_CASE("run_step rejects captured states") {
  Fixture fx;
  TaskSpec task = default_task(BoardConfig{});
  OraclePolicy oracle;
  EmergencyOverlay overlay;
  GameState s = make_state({{6, 5}, {6, 7}, {5, 6}}, {6, 6});
  CHECK_THROWS_AS(fx.planner.run_step(s, task, oracle, overlay),
                  std::logic_error);
}

TEST_CASE("wrong-variant selection is a fault, pursuers stand still") {
  Fixture fx;
  TaskSpec task = default_task(BoardConfig{});
  StuckPolicy stuck;
  EmergencyOverlay overlay;
  GameState s = make_state({{0, 0}, {10, 0}, {0, 10}}, {20, 20});
  auto [next, rec] = fx.planner.run_step(s, task, stuck, overlay);
  CHECK(rec.selection_fault);
  CHECK(next.pursuers == s.pursuers);
  CHECK(next.violation_count == 0);  // a fault is not a rule violation
  CHECK(rec.stages.back().selection_fault);
}

TEST_CASE("oracle episode succeeds from the fixed figure start") {
  Fixture fx;
  TaskSpec task = default_task(BoardConfig{});
  task.fixed_pursuers = std::vector<GridPoint>{{3, 8}, {14, 19}, {17, 2}};
  task.fixed_evader = GridPoint{20, 18};
  OraclePolicy oracle;
  EpisodeTrace trace = fx.planner.run_episode(task, oracle, 1);
  CHECK(trace.outcome.kind == OutcomeKind::Success);
  CHECK(trace.outcome.steps <= 100);
  int violations = 0;
  for (const StepRecord& s : trace.steps) violations += s.violations;
  CHECK(violations == 0);
}

TEST_CASE("step_limit zero fails immediately") {
  Fixture fx;
  BoardConfig cfg;
  cfg.step_limit = 0;
  TaskSpec task = default_task(cfg);
  task.fixed_pursuers = std::vector<GridPoint>{{0, 0}, {0, 20}, {20, 0}};
  task.fixed_evader = GridPoint{10, 10};
  OraclePolicy oracle;
  EpisodeTrace trace = fx.planner.run_episode(task, oracle, 1);
  CHECK(trace.outcome.kind == OutcomeKind::FailureNoViolation);
  CHECK(trace.steps.empty());
}

TEST_CASE("an always-illegal mover fails with violation after the limit") {
  Fixture fx;
  BoardConfig cfg;
  TaskSpec task = default_task(cfg);
  MemorizedCorpus corpus;
  corpus.add(make_state({{0, 0}, {0, 1}, {0, 2}}, {20, 20}),
             {{-1, -1}, {-1, -1}, {-1, -1}});
  corpus.finalize();
  KdMimicPolicy bad(std::move(corpus));
  EpisodeTrace trace = fx.planner.run_episode(task, bad, 5);
  CHECK(trace.outcome.kind == OutcomeKind::FailureWithViolation);
  int violations = 0;
  for (const StepRecord& s : trace.steps) violations += s.violations;
  CHECK(violations == cfg.violation_limit + 1);  // 8th illegal move ends it
}

TEST_CASE("episode traces are deterministic and replayable") {
  Fixture fx;
  TaskSpec task = default_task(BoardConfig{});
  OraclePolicy oracle;
  EpisodeTrace a = fx.planner.run_episode(task, oracle, 99);
  EpisodeTrace b = fx.planner.run_episode(task, oracle, 99);
  CHECK(serialize_trace(a) == serialize_trace(b));

  NoisyPolicy n1(0.3), n2(0.3);
  EpisodeTrace c = fx.planner.run_episode(task, n1, 99);
  EpisodeTrace d = fx.planner.run_episode(task, n2, 99);
  CHECK(serialize_trace(c) == serialize_trace(d));

  EpisodeTrace parsed = parse_trace(serialize_trace(c));
  CHECK(serialize_trace(parsed) == serialize_trace(c));
}

TEST_CASE("emergency injection is idempotent and slots at stage 2.5") {
  TaskSpec task = default_task(BoardConfig{}, true);
  EmergencyOverlay overlay;
  RankedCandidates cands;
  cands.items = {{"filter_valid_moves", 1.0}, {"select_best_move", 0.5}};
  auto out = inject_emergency(task, "restricted_area", cands, overlay);
  CHECK(out.contains("filter_restricted_cells"));
  CHECK(overlay.specs.size() == 1);
  CHECK(overlay.specs[0].stage_tag == 2.5);

  auto again = inject_emergency(task, "restricted_area", out, overlay);
  CHECK(overlay.specs.size() == 1);
  int count = 0;
  for (const auto& [name, _] : again.items)
    if (name == "filter_restricted_cells") ++count;
  CHECK(count == 1);

  CHECK_THROWS_AS(inject_emergency(task, "nope", cands, overlay),
                  std::invalid_argument);
}

TEST_CASE("emergency episodes avoid the restricted area, others are unaffected") {
  Fixture fx;
  TaskSpec plain = default_task(BoardConfig{}, false);
  TaskSpec guarded = default_task(BoardConfig{}, true);
  OraclePolicy oracle;

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EpisodeTrace t = fx.planner.run_episode(guarded, oracle, seed);
    CHECK(t.outcome.kind == OutcomeKind::Success);
    for (const StepRecord& s : t.steps) {
      CHECK(s.violations == 0);
      CHECK(s.stages.size() == 4);  // J + 1 with the emergency active
    }
    for (const GameState& st : replay_states(t)) {
      for (GridPoint p : st.pursuers)
        CHECK_FALSE(st.config.is_restricted(p));
      CHECK_FALSE(st.config.is_restricted(st.evader));
    }

    EpisodeTrace p = fx.planner.run_episode(plain, oracle, seed);
    for (const StepRecord& s : p.steps) CHECK(s.stages.size() == 3);
  }
}

TEST_CASE("replay_states is consistent with recorded verdicts") {
  Fixture fx;
  TaskSpec task = default_task(BoardConfig{});
  OraclePolicy oracle;
  EpisodeTrace t = fx.planner.run_episode(task, oracle, 1234);
  auto states = replay_states(t);
  REQUIRE(states.size() == t.steps.size() + 1);
  CHECK(is_captured(states.back()));
  CHECK(states.back().step_count == t.outcome.steps);
}
