#include "lp/planner.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lp {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void render_point(std::ostream& os, GridPoint p) {
  os << '(' << p.x << ',' << p.y << ')';
}

}  // namespace

std::string render_state(const GameState& state) {
  std::ostringstream os;
  os << "pursuers";
  for (const GridPoint& p : state.pursuers) {
    os << ' ';
    render_point(os, p);
  }
  os << " evader ";
  render_point(os, state.evader);
  os << " step " << state.step_count << " violations "
     << state.violation_count;
  return os.str();
}

std::uint64_t digest_stage_value(const StageValue& v) {
  std::ostringstream os;
  os << to_string(kind_of(v)) << '|';
  std::visit(
      [&os](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TaskContext>) {
          os << x.instructions << '|' << render_state(x.state) << '|'
             << x.stage;
        } else if constexpr (std::is_same_v<T, DistanceTable>) {
          for (int d : x.distances) os << d << ',';
          os << '|' << render_state(x.state);
        } else if constexpr (std::is_same_v<T, MoveCandidates>) {
          for (const auto& lst : x.per_pursuer) {
            for (GridPoint p : lst) render_point(os, p);
            os << ';';
          }
          os << '|' << render_state(x.state);
        } else {
          for (GridPoint p : x.moves) render_point(os, p);
        }
      },
      v);
  return fnv1a(os.str());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over seed ^ golden-ratio-scaled index
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

StageValue execute_stage(const FunctionSpec& f, const StageValue& input) {
  if (!f.accepts(kind_of(input))) {
    std::string expected;
    for (StageKind k : f.input_kinds) {
      if (!expected.empty()) expected += " or ";
      expected += to_string(k);
    }
    throw std::invalid_argument(f.name + " expects " + expected + ", got " +
                                to_string(kind_of(input)));
  }
  return f.impl(input);
}

// ---- task / emergency registry ----------------------------------------------

namespace {

const std::string kRules =
    "Pursuit game: three pursuers chase one evader on a bounded grid. Each "
    "step every pursuer may move up to two units of Manhattan distance and "
    "the evader up to one unit. The evader is captured when its Manhattan "
    "distance to all three pursuers is less than two units. More than seven "
    "illegal moves lose the game; the step limit is one hundred.";

struct TriggerDef {
  double stage_tag;
  std::string query_template;
  bool (*active)(const TaskSpec&);
  FunctionSpec (*make)(const TaskSpec&);
};

const std::map<std::string, TriggerDef>& trigger_registry() {
  static const std::map<std::string, TriggerDef> registry = {
      {"restricted_area",
       TriggerDef{
           2.5,
           "emergency: remove every candidate coordinate inside the "
           "restricted area rectangle, a coordinate filtering step between "
           "valid move enumeration and move selection",
           [](const TaskSpec& t) { return t.board.restricted_area.has_value(); },
           [](const TaskSpec& t) -> FunctionSpec {
             if (!t.board.restricted_area)
               throw std::invalid_argument(
                   "restricted_area trigger without an active rectangle");
             return make_restricted_area_filter(*t.board.restricted_area);
           }}},
  };
  return registry;
}

const TriggerDef& trigger_def(const std::string& id) {
  auto it = trigger_registry().find(id);
  if (it == trigger_registry().end())
    throw std::invalid_argument("unknown emergency trigger: " + id);
  return it->second;
}

}  // namespace

TaskSpec default_task(BoardConfig board, bool with_emergency) {
  TaskSpec task;
  task.instructions = kRules;
  task.board = board;
  task.stages = {
      {1.0,
       "compute the manhattan distance from each pursuer to the evader and "
       "build the distance table"},
      {2.0,
       "filter the valid moves: enumerate every board cell reachable within "
       "the movement budget of two units, staying inside the board bounds"},
      {3.0,
       "select the best move for each pursuer, choosing the candidate "
       "coordinate closest to the evader"},
  };
  if (with_emergency) {
    if (!task.board.restricted_area)
      task.board.restricted_area = centered_restricted_area(task.board);
    task.emergency_triggers.push_back("restricted_area");
  }
  return task;
}

bool EmergencyOverlay::has_trigger(const std::string& id) const {
  return std::find(fired_triggers.begin(), fired_triggers.end(), id) !=
         fired_triggers.end();
}

const FunctionSpec* EmergencyOverlay::find(std::string_view name) const {
  for (const FunctionSpec& s : specs)
    if (s.name == name) return &s;
  return nullptr;
}

RankedCandidates inject_emergency(const TaskSpec& task,
                                  const std::string& trigger,
                                  RankedCandidates candidates,
                                  EmergencyOverlay& overlay) {
  const TriggerDef& def = trigger_def(trigger);
  if (!overlay.has_trigger(trigger)) {
    FunctionSpec spec = def.make(task);
    if (!overlay.find(spec.name)) overlay.specs.push_back(std::move(spec));
    overlay.fired_triggers.push_back(trigger);
  }
  const FunctionSpec* spec = overlay.find(def.make(task).name);
  if (spec && !candidates.contains(spec->name))
    candidates.items.emplace_back(spec->name, 0.0);
  return candidates;
}

// ---- planner ----------------------------------------------------------------

Planner::Planner(const FunctionBase& base, const Retriever& retriever,
                 PlannerConfig cfg)
    : base_(&base), retriever_(&retriever), cfg_(cfg) {}

namespace {

struct EffectiveStage {
  double tag;
  std::string query_template;
  std::optional<std::string> trigger;  // set for emergency stages
};

std::vector<EffectiveStage> effective_stages(const TaskSpec& task) {
  std::vector<EffectiveStage> stages;
  for (const StageDescriptor& d : task.stages)
    stages.push_back({d.stage_tag, d.query_template, std::nullopt});
  for (const std::string& id : task.emergency_triggers) {
    const TriggerDef& def = trigger_def(id);
    if (def.active(task))
      stages.push_back({def.stage_tag, def.query_template, id});
  }
  std::stable_sort(stages.begin(), stages.end(),
                   [](const auto& a, const auto& b) { return a.tag < b.tag; });
  return stages;
}

}  // namespace

std::pair<GameState, StepRecord> Planner::run_step(
    const GameState& state, const TaskSpec& task, SelectorPolicy& policy,
    EmergencyOverlay& overlay) const {
  if (is_captured(state))
    throw std::logic_error("run_step called on a captured state");

  StepRecord rec;
  StageValue value = TaskContext{task.instructions, state, 1.0};

  for (const EffectiveStage& st : effective_stages(task)) {
    RetrievalQuery query;
    query.instructions = st.query_template;
    query.state_summary = render_state(state);
    double tag_floor = static_cast<double>(static_cast<int>(st.tag));
    if (st.tag == tag_floor) query.stage_hint = static_cast<int>(st.tag);

    RankedCandidates candidates = retriever_->top_k(query, cfg_.top_k);
    if (st.trigger)
      candidates = inject_emergency(task, *st.trigger, candidates, overlay);

    std::vector<const FunctionSpec*> specs;
    specs.reserve(candidates.items.size());
    for (const auto& [name, score] : candidates.items) {
      const FunctionSpec* s = overlay.find(name);
      if (!s) s = base_->find(name);
      if (!s) throw std::logic_error("candidate not resolvable: " + name);
      specs.push_back(s);
    }

    StageRecord srec;
    srec.stage_tag = st.tag;
    srec.candidates = candidates;

    TaskContext policy_ctx{task.instructions, state, st.tag};
    std::string selected;
    bool fault = false;
    try {
      selected = policy.select(query, specs, policy_ctx);
      if (!candidates.contains(selected)) fault = true;
    } catch (const SelectionFault&) {
      fault = true;
    }

    // a pursuer whose candidate list was emptied (fully enclosed by the
    // restricted area) stays in place this step
    if (auto* mc = std::get_if<MoveCandidates>(&value)) {
      for (std::size_t i = 0; i < mc->per_pursuer.size(); ++i) {
        if (mc->per_pursuer[i].empty()) {
          mc->per_pursuer[i] = {mc->state.pursuers[i]};
          if (std::find(rec.stalled.begin(), rec.stalled.end(),
                        static_cast<int>(i)) == rec.stalled.end())
            rec.stalled.push_back(static_cast<int>(i));
        }
      }
    }

    const FunctionSpec* spec = nullptr;
    if (!fault) {
      spec = overlay.find(selected);
      if (!spec) spec = base_->find(selected);
      if (!spec->accepts(kind_of(value))) fault = true;
    }

    if (fault) {
      srec.selected = selected;
      srec.selection_fault = true;
      rec.selection_fault = true;
      rec.stages.push_back(std::move(srec));
      break;
    }

    srec.selected = selected;
    srec.input_digest = digest_stage_value(value);
    value = spec->impl(value);
    srec.output_digest = digest_stage_value(value);
    rec.stages.push_back(std::move(srec));
  }

  if (!rec.selection_fault && std::holds_alternative<ChosenMoves>(value)) {
    rec.proposed_moves = std::get<ChosenMoves>(value).moves;
  } else {
    rec.proposed_moves = state.pursuers;  // stand still on a faulted step
  }

  GameState next = state;
  for (std::size_t i = 0; i < next.pursuers.size(); ++i) {
    auto [after, verdict] =
        apply_move(next, AgentId::pursuer(static_cast<int>(i)),
                   rec.proposed_moves[i]);
    next = std::move(after);
    rec.verdicts.push_back(verdict);
    if (verdict == MoveVerdict::Illegal) ++rec.violations;
    if (next.violation_count > next.config.violation_limit) break;
  }

  rec.evader_move = next.evader;
  if (next.violation_count <= next.config.violation_limit) {
    GridPoint target = evader_policy_greedy(next);
    auto [after, verdict] = apply_move(next, AgentId::evader(), target);
    next = std::move(after);
    rec.evader_move = target;
    rec.evader_moved = true;
  }

  next.step_count += 1;
  return {std::move(next), std::move(rec)};
}

GameState Planner::initial_state(const TaskSpec& task,
                                 std::uint64_t seed) const {
  GameState state;
  state.config = task.board;
  if (task.fixed_pursuers && task.fixed_evader) {
    state.pursuers = *task.fixed_pursuers;
    state.evader = *task.fixed_evader;
    return state;
  }

  std::mt19937_64 gen(mix_seed(seed, 0));
  const BoardConfig& cfg = task.board;
  auto draw_cell = [&]() -> GridPoint {
    while (true) {
      auto idx = gen() % (static_cast<std::uint64_t>(cfg.width) * cfg.height);
      GridPoint p{static_cast<int>(idx % cfg.width),
                  static_cast<int>(idx / cfg.width)};
      if (!cfg.is_restricted(p)) return p;
    }
  };

  const int n = cfg.pursuer_count;
  while (true) {
    std::vector<GridPoint> cells;
    while (static_cast<int>(cells.size()) < n + 1) {
      GridPoint p = draw_cell();
      if (std::find(cells.begin(), cells.end(), p) == cells.end())
        cells.push_back(p);
    }
    state.pursuers.assign(cells.begin(), cells.begin() + n);
    state.evader = cells.back();
    if (!is_captured(state)) return state;
    state.pursuers.clear();
  }
}

namespace {

std::optional<GameOutcome> check_termination(const GameState& state) {
  if (is_captured(state))
    return GameOutcome{OutcomeKind::Success, state.step_count};
  if (state.violation_count > state.config.violation_limit)
    return GameOutcome{OutcomeKind::FailureWithViolation, 0};
  if (state.step_count >= state.config.step_limit)
    return GameOutcome{OutcomeKind::FailureNoViolation, 0};
  return std::nullopt;
}

}  // namespace

EpisodeTrace Planner::run_episode(const TaskSpec& task, SelectorPolicy& policy,
                                  std::uint64_t seed) const {
  policy.reseed(mix_seed(seed, 1));
  EpisodeTrace trace;
  trace.seed = seed;
  trace.policy_spec = policy.name();
  trace.top_k = cfg_.top_k;
  trace.task = task;

  GameState state = initial_state(task, seed);
  trace.initial_pursuers = state.pursuers;
  trace.initial_evader = state.evader;

  EmergencyOverlay overlay;
  while (true) {
    if (auto outcome = check_termination(state)) {
      trace.outcome = *outcome;
      break;
    }
    auto [next, rec] = run_step(state, task, policy, overlay);
    state = std::move(next);
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

EpisodeTrace Planner::run_episode(const TaskSpec& task,
                                  const KdMimicPolicy& policy,
                                  std::uint64_t seed) const {
  EpisodeTrace trace;
  trace.seed = seed;
  trace.policy_spec = policy.name();
  trace.top_k = cfg_.top_k;
  trace.task = task;

  GameState state = initial_state(task, seed);
  trace.initial_pursuers = state.pursuers;
  trace.initial_evader = state.evader;

  while (true) {
    if (auto outcome = check_termination(state)) {
      trace.outcome = *outcome;
      break;
    }
    StepRecord rec;
    rec.proposed_moves = policy.propose(state);
    rec.proposed_moves.resize(state.pursuers.size(), state.evader);

    GameState next = state;
    for (std::size_t i = 0; i < next.pursuers.size(); ++i) {
      auto [after, verdict] =
          apply_move(next, AgentId::pursuer(static_cast<int>(i)),
                     rec.proposed_moves[i]);
      next = std::move(after);
      rec.verdicts.push_back(verdict);
      if (verdict == MoveVerdict::Illegal) ++rec.violations;
      if (next.violation_count > next.config.violation_limit) break;
    }
    rec.evader_move = next.evader;
    if (next.violation_count <= next.config.violation_limit) {
      GridPoint target = evader_policy_greedy(next);
      auto [after, verdict] = apply_move(next, AgentId::evader(), target);
      next = std::move(after);
      rec.evader_move = target;
      rec.evader_moved = true;
    }
    next.step_count += 1;
    state = std::move(next);
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

MemorizedCorpus build_corpus(const Planner& planner, const TaskSpec& task,
                             SelectorPolicy& teacher, int episodes,
                             std::uint64_t seed) {
  MemorizedCorpus corpus;
  for (int e = 0; e < episodes; ++e) {
    EpisodeTrace trace =
        planner.run_episode(task, teacher, mix_seed(seed, 1000 + e));
    GameState state;
    state.config = task.board;
    state.pursuers = trace.initial_pursuers;
    state.evader = trace.initial_evader;
    for (const StepRecord& rec : trace.steps) {
      corpus.add(state, rec.proposed_moves);
      for (std::size_t i = 0; i < state.pursuers.size(); ++i) {
        auto [after, verdict] = apply_move(
            state, AgentId::pursuer(static_cast<int>(i)), rec.proposed_moves[i]);
        state = std::move(after);
        if (state.violation_count > state.config.violation_limit) break;
      }
      if (rec.evader_moved) {
        auto [after, verdict] =
            apply_move(state, AgentId::evader(), rec.evader_move);
        state = std::move(after);
      }
      state.step_count += 1;
    }
  }
  corpus.finalize();
  return corpus;
}

}  // namespace lp
