#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lp/function_base.hpp"
#include "lp/policies.hpp"
#include "lp/retriever.hpp"

namespace lp {

struct StageDescriptor {
  double stage_tag = 1.0;
  std::string query_template;  // instructions part of the stage query
};

struct TaskSpec {
  std::string instructions;
  BoardConfig board;
  std::vector<StageDescriptor> stages;            // ordered by stage_tag
  std::vector<std::string> emergency_triggers;    // registered trigger ids
  std::optional<std::vector<GridPoint>> fixed_pursuers;
  std::optional<GridPoint> fixed_evader;
};

// The 3-stage plan (distances -> valid moves -> best move) on the given
// board; registers the restricted-area trigger when with_emergency is set.
TaskSpec default_task(BoardConfig board, bool with_emergency = false);

// Episode-local injected functions; the base FunctionBase is never mutated.
struct EmergencyOverlay {
  std::vector<FunctionSpec> specs;
  std::vector<std::string> fired_triggers;

  bool has_trigger(const std::string& id) const;
  const FunctionSpec* find(std::string_view name) const;
};

// Instantiates the trigger's template into the overlay (idempotent) and
// appends it to the candidate list. Throws on an unknown trigger id.
RankedCandidates inject_emergency(const TaskSpec& task,
                                  const std::string& trigger,
                                  RankedCandidates candidates,
                                  EmergencyOverlay& overlay);

// Runs one registered function on a stage value after checking variant
// compatibility; throws std::invalid_argument naming expected vs actual.
StageValue execute_stage(const FunctionSpec& f, const StageValue& input);

std::string render_state(const GameState& state);
std::uint64_t digest_stage_value(const StageValue& v);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// ---- trace ------------------------------------------------------------------

struct StageRecord {
  double stage_tag = 0.0;
  RankedCandidates candidates;
  std::string selected;
  bool selection_fault = false;
  std::uint64_t input_digest = 0;
  std::uint64_t output_digest = 0;
};

struct StepRecord {
  std::vector<StageRecord> stages;        // empty for direct move policies
  std::vector<GridPoint> proposed_moves;  // one target per pursuer
  std::vector<MoveVerdict> verdicts;
  std::vector<int> stalled;               // pursuers with no usable candidate
  GridPoint evader_move;
  bool evader_moved = false;  // false when the step ended on violation limit
  int violations = 0;         // violations incurred during this step
  bool selection_fault = false;
};

struct EpisodeTrace {
  std::uint64_t seed = 0;
  std::string policy_spec;
  std::size_t top_k = 5;
  TaskSpec task;
  std::vector<GridPoint> initial_pursuers;
  GridPoint initial_evader;
  std::vector<StepRecord> steps;
  GameOutcome outcome;
};

// ---- planner ----------------------------------------------------------------

struct PlannerConfig {
  std::size_t top_k = 5;
};

class Planner {
 public:
  Planner(const FunctionBase& base, const Retriever& retriever,
          PlannerConfig cfg = {});

  // One full decision round: pursuer stages + moves, then the evader.
  // Precondition: the game is not terminated.
  std::pair<GameState, StepRecord> run_step(const GameState& state,
                                            const TaskSpec& task,
                                            SelectorPolicy& policy,
                                            EmergencyOverlay& overlay) const;

  EpisodeTrace run_episode(const TaskSpec& task, SelectorPolicy& policy,
                           std::uint64_t seed) const;
  EpisodeTrace run_episode(const TaskSpec& task, const KdMimicPolicy& policy,
                           std::uint64_t seed) const;

  GameState initial_state(const TaskSpec& task, std::uint64_t seed) const;
  std::size_t top_k() const { return cfg_.top_k; }
  const FunctionBase& base() const { return *base_; }

 private:
  const FunctionBase* base_;
  const Retriever* retriever_;
  PlannerConfig cfg_;
};

// Harvests (state -> moves) pairs from teacher-run episodes.
MemorizedCorpus build_corpus(const Planner& planner, const TaskSpec& task,
                             SelectorPolicy& teacher, int episodes,
                             std::uint64_t seed);

}  // namespace lp
