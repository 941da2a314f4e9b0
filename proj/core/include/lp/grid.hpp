#pragma once

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lp {

struct GridPoint {
  int x = 0;
  int y = 0;
  auto operator<=>(const GridPoint&) const = default;
};

int manhattan_distance(GridPoint a, GridPoint b);

// Axis-aligned rectangle, corners inclusive.
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(GridPoint p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  auto operator<=>(const Rect&) const = default;
};

struct BoardConfig {
  int width = 21;
  int height = 21;
  int pursuer_budget = 2;
  int evader_budget = 1;
  int capture_radius = 2;
  int step_limit = 100;
  int violation_limit = 7;
  int pursuer_count = 3;
  // When set, a stay-in-place move (displacement 0) is illegal.
  bool strict_move = false;
  std::optional<Rect> restricted_area;

  bool in_bounds(GridPoint p) const {
    return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
  }
  bool is_restricted(GridPoint p) const {
    return restricted_area && restricted_area->contains(p);
  }
  auto operator<=>(const BoardConfig&) const = default;
};

// Centered 5x5 block, (8..12, 8..12) on the default 21x21 board.
Rect centered_restricted_area(const BoardConfig& cfg);

enum class AgentKind { Pursuer, Evader };

struct AgentId {
  AgentKind kind = AgentKind::Pursuer;
  int index = 0;  // pursuer slot; ignored for the evader
  static AgentId pursuer(int i) { return {AgentKind::Pursuer, i}; }
  static AgentId evader() { return {AgentKind::Evader, 0}; }
};

struct GameState {
  std::vector<GridPoint> pursuers;
  GridPoint evader;
  int step_count = 0;
  int violation_count = 0;
  BoardConfig config;

  bool operator==(const GameState&) const = default;
};

enum class OutcomeKind { Success, FailureNoViolation, FailureWithViolation };

const char* to_string(OutcomeKind k);
OutcomeKind outcome_kind_from_string(const std::string& s);

struct GameOutcome {
  OutcomeKind kind = OutcomeKind::FailureNoViolation;
  int steps = 0;  // meaningful only for Success
  bool operator==(const GameOutcome&) const = default;
};

enum class MoveVerdict { Legal, Illegal };

enum class RestrictedFilter { Apply, Ignore };

// All cells reachable within the agent's budget, in-bounds, lexicographically
// sorted by (x, y). Restricted cells are excluded unless filter = Ignore.
// Throws std::invalid_argument on a bad agent id.
std::vector<GridPoint> enumerate_legal_moves(
    const GameState& state, AgentId agent,
    RestrictedFilter filter = RestrictedFilter::Apply);

// True iff every pursuer is strictly within capture_radius of the evader.
bool is_captured(const GameState& state);

// Relocates the agent if the target is legal; otherwise increments the
// violation counter and leaves the agent in place. Never mutates the input.
std::pair<GameState, MoveVerdict> apply_move(const GameState& state,
                                             AgentId agent, GridPoint target);

// Maximin evader: the legal move maximizing the minimum distance to the
// pursuers, ties broken lexicographically. Falls back to the current cell
// when the legal set is empty.
GridPoint evader_policy_greedy(const GameState& state);

}  // namespace lp
