#include "lp/grid.hpp"

#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace lp {

int manhattan_distance(GridPoint a, GridPoint b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

Rect centered_restricted_area(const BoardConfig& cfg) {
  int cx = cfg.width / 2;
  int cy = cfg.height / 2;
  return Rect{cx - 2, cy - 2, cx + 2, cy + 2};
}

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Success: return "Success";
    case OutcomeKind::FailureNoViolation: return "FailureNoViolation";
    case OutcomeKind::FailureWithViolation: return "FailureWithViolation";
  }
  return "?";
}

OutcomeKind outcome_kind_from_string(const std::string& s) {
  if (s == "Success") return OutcomeKind::Success;
  if (s == "FailureNoViolation") return OutcomeKind::FailureNoViolation;
  if (s == "FailureWithViolation") return OutcomeKind::FailureWithViolation;
  throw std::invalid_argument("unknown outcome kind: " + s);
}

namespace {

GridPoint agent_position(const GameState& state, AgentId agent) {
  if (agent.kind == AgentKind::Evader) return state.evader;
  if (agent.index < 0 || agent.index >= static_cast<int>(state.pursuers.size()))
    throw std::invalid_argument("invalid pursuer index " +
                                std::to_string(agent.index));
  return state.pursuers[static_cast<std::size_t>(agent.index)];
}

int agent_budget(const GameState& state, AgentId agent) {
  return agent.kind == AgentKind::Evader ? state.config.evader_budget
                                         : state.config.pursuer_budget;
}

}  // namespace

std::vector<GridPoint> enumerate_legal_moves(const GameState& state,
                                             AgentId agent,
                                             RestrictedFilter filter) {
  GridPoint cur = agent_position(state, agent);
  int budget = agent_budget(state, agent);
  const BoardConfig& cfg = state.config;

  std::vector<GridPoint> out;
  for (int dx = -budget; dx <= budget; ++dx) {
    int rem = budget - std::abs(dx);
    for (int dy = -rem; dy <= rem; ++dy) {
      GridPoint p{cur.x + dx, cur.y + dy};
      if (!cfg.in_bounds(p)) continue;
      if (cfg.strict_move && p == cur) continue;
      if (filter == RestrictedFilter::Apply && cfg.is_restricted(p)) continue;
      out.push_back(p);
    }
  }
  // the dx/dy sweep is already ordered by (x, y)
  return out;
}

bool is_captured(const GameState& state) {
  for (const GridPoint& p : state.pursuers) {
    if (manhattan_distance(p, state.evader) >= state.config.capture_radius)
      return false;
  }
  return true;
}

std::pair<GameState, MoveVerdict> apply_move(const GameState& state,
                                             AgentId agent, GridPoint target) {
  auto legal = enumerate_legal_moves(state, agent);
  bool ok = false;
  for (const GridPoint& p : legal) {
    if (p == target) { ok = true; break; }
  }
  GameState next = state;
  if (!ok) {
    next.violation_count += 1;
    return {std::move(next), MoveVerdict::Illegal};
  }
  if (agent.kind == AgentKind::Evader) {
    next.evader = target;
  } else {
    next.pursuers[static_cast<std::size_t>(agent.index)] = target;
  }
  return {std::move(next), MoveVerdict::Legal};
}

GridPoint evader_policy_greedy(const GameState& state) {
  auto legal = enumerate_legal_moves(state, AgentId::evader());
  if (legal.empty()) return state.evader;

  GridPoint best = legal.front();
  int best_score = std::numeric_limits<int>::min();
  for (const GridPoint& cand : legal) {
    int min_dist = std::numeric_limits<int>::max();
    for (const GridPoint& p : state.pursuers)
      min_dist = std::min(min_dist, manhattan_distance(cand, p));
    if (min_dist > best_score) {  // legal is lex-sorted, first win = lex pick
      best_score = min_dist;
      best = cand;
    }
  }
  return best;
}

}  // namespace lp
