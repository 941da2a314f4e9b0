#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "lp/grid.hpp"

using namespace lp;

namespace {

GameState make_state(std::vector<GridPoint> pursuers, GridPoint evader,
                     BoardConfig cfg = {}) {
  GameState s;
  s.pursuers = std::move(pursuers);
  s.evader = evader;
  s.config = cfg;
  return s;
}

// Independent oracle: scan every board cell against the displacement,
// bounds, and restricted-area predicates.
std::vector<GridPoint> brute_force_moves(const GameState& s, GridPoint cur,
                                         int budget, bool apply_restricted) {
  std::vector<GridPoint> out;
  for (int x = 0; x < s.config.width; ++x)
    for (int y = 0; y < s.config.height; ++y) {
      GridPoint p{x, y};
      if (manhattan_distance(cur, p) > budget) continue;
      if (s.config.strict_move && p == cur) continue;
      if (apply_restricted && s.config.is_restricted(p)) continue;
      out.push_back(p);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("manhattan distance examples") {
  CHECK(manhattan_distance({3, 8}, {20, 18}) == 27);
  CHECK(manhattan_distance({5, 5}, {5, 5}) == 0);
  CHECK(manhattan_distance({0, 0}, {2, 0}) == 2);
}

TEST_CASE("manhattan distance metric properties") {
  std::mt19937_64 rng(7);
  auto pt = [&] {
    return GridPoint{static_cast<int>(rng() % 41) - 20,
                     static_cast<int>(rng() % 41) - 20};
  };
  for (int i = 0; i < 10000; ++i) {
    GridPoint a = pt(), b = pt(), c = pt();
    CHECK(manhattan_distance(a, b) == manhattan_distance(b, a));
    CHECK((manhattan_distance(a, b) == 0) == (a == b));
    CHECK(manhattan_distance(a, c) <=
          manhattan_distance(a, b) + manhattan_distance(b, c));
  }
}

TEST_CASE("legal moves: corner pursuer has 6 cells") {
  auto s = make_state({{0, 0}, {10, 10}, {20, 20}}, {5, 5});
  auto moves = enumerate_legal_moves(s, AgentId::pursuer(0));
  std::set<GridPoint> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(std::set<GridPoint>(moves.begin(), moves.end()) == expect);
}

TEST_CASE("legal moves: evader neighborhood plus stay") {
  auto s = make_state({{0, 0}, {1, 0}, {2, 0}}, {10, 10});
  auto moves = enumerate_legal_moves(s, AgentId::evader());
  std::set<GridPoint> expect{{10, 10}, {9, 10}, {11, 10}, {10, 9}, {10, 11}};
  CHECK(std::set<GridPoint>(moves.begin(), moves.end()) == expect);
}

TEST_CASE("legal moves: fully enclosed by restricted area") {
  BoardConfig cfg;
  cfg.restricted_area = Rect{8, 8, 12, 12};
  auto s = make_state({{10, 10}, {0, 0}, {20, 20}}, {5, 5}, cfg);
  CHECK(enumerate_legal_moves(s, AgentId::pursuer(0)).empty());
  // without the filter the full ball is visible again
  CHECK(enumerate_legal_moves(s, AgentId::pursuer(0), RestrictedFilter::Ignore)
            .size() == 13);
}

TEST_CASE("legal moves: invalid agent id") {
  auto s = make_state({{0, 0}, {1, 0}, {2, 0}}, {10, 10});
  CHECK_THROWS_AS(enumerate_legal_moves(s, AgentId::pursuer(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_legal_moves(s, AgentId::pursuer(-1)),
                  std::invalid_argument);
}

TEST_CASE("legal moves match the brute-force oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    BoardConfig cfg;
    cfg.width = 5 + static_cast<int>(rng() % 20);
    cfg.height = 5 + static_cast<int>(rng() % 20);
    cfg.strict_move = (rng() % 4) == 0;
    if (rng() % 2) {
      int x0 = static_cast<int>(rng() % cfg.width);
      int y0 = static_cast<int>(rng() % cfg.height);
      cfg.restricted_area = Rect{x0, y0, std::min(x0 + 4, cfg.width - 1),
                                 std::min(y0 + 4, cfg.height - 1)};
    }
    auto cell = [&] {
      return GridPoint{static_cast<int>(rng() % cfg.width),
                       static_cast<int>(rng() % cfg.height)};
    };
    auto s = make_state({cell(), cell(), cell()}, cell(), cfg);
    for (int a = 0; a < 4; ++a) {
      AgentId id = a < 3 ? AgentId::pursuer(a) : AgentId::evader();
      GridPoint cur = a < 3 ? s.pursuers[a] : s.evader;
      int budget = a < 3 ? cfg.pursuer_budget : cfg.evader_budget;
      auto got = enumerate_legal_moves(s, id);
      std::sort(got.begin(), got.end());
      CHECK(got == brute_force_moves(s, cur, budget, true));
    }
  }
}

TEST_CASE("capture predicate") {
  auto s = make_state({{5, 5}, {5, 7}, {7, 6}}, {6, 6});
  CHECK_FALSE(is_captured(s));  // (5,5) is at distance 2
  auto s2 = make_state({{6, 5}, {6, 7}, {5, 6}}, {6, 6});
  CHECK(is_captured(s2));
  auto s3 = make_state({{6, 6}, {6, 7}, {5, 6}}, {6, 6});
  CHECK(is_captured(s3));  // co-located pursuer, distance 0
}

TEST_CASE("capture is monotone in single-pursuer distance") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    auto cell = [&] {
      return GridPoint{static_cast<int>(rng() % 21),
                       static_cast<int>(rng() % 21)};
    };
    auto s = make_state({cell(), cell(), cell()}, cell());
    if (!is_captured(s)) continue;
    // move one pursuer strictly closer; must stay captured
    int i = static_cast<int>(rng() % 3);
    GridPoint p = s.pursuers[i];
    if (p == s.evader) continue;
    GridPoint closer = p;
    if (p.x != s.evader.x)
      closer.x += p.x < s.evader.x ? 1 : -1;
    else
      closer.y += p.y < s.evader.y ? 1 : -1;
    GameState s2 = s;
    s2.pursuers[i] = closer;
    CHECK(is_captured(s2));
  }
}

TEST_CASE("apply_move legal and illegal") {
  auto s = make_state({{0, 0}, {10, 10}, {20, 20}}, {5, 5});

  auto [legal, v1] = apply_move(s, AgentId::pursuer(0), {1, 1});
  CHECK(v1 == MoveVerdict::Legal);
  CHECK(legal.pursuers[0] == GridPoint{1, 1});
  CHECK(legal.violation_count == 0);
  CHECK(s.pursuers[0] == GridPoint{0, 0});  // input untouched

  auto [illegal, v2] = apply_move(s, AgentId::pursuer(0), {3, 0});
  CHECK(v2 == MoveVerdict::Illegal);
  CHECK(illegal.pursuers[0] == GridPoint{0, 0});
  CHECK(illegal.violation_count == 1);
}

TEST_CASE("apply_move never lands out of bounds or restricted") {
  std::mt19937_64 rng(3);
  BoardConfig cfg;
  cfg.restricted_area = Rect{8, 8, 12, 12};
  for (int trial = 0; trial < 2000; ++trial) {
    auto cell = [&] {
      GridPoint p;
      do {
        p = {static_cast<int>(rng() % 21), static_cast<int>(rng() % 21)};
      } while (cfg.is_restricted(p));
      return p;
    };
    auto s = make_state({cell(), cell(), cell()}, cell(), cfg);
    GridPoint target{static_cast<int>(rng() % 31) - 5,
                     static_cast<int>(rng() % 31) - 5};
    auto [next, verdict] = apply_move(s, AgentId::pursuer(0), target);
    CHECK(s.config.in_bounds(next.pursuers[0]));
    CHECK_FALSE(s.config.is_restricted(next.pursuers[0]));
  }
}

TEST_CASE("greedy evader flees the cluster") {
  auto s = make_state({{5, 9}, {5, 10}, {5, 11}}, {10, 10});
  CHECK(evader_policy_greedy(s) == GridPoint{11, 10});
}

TEST_CASE("greedy evader cornered picks lexicographic maximin") {
  auto s = make_state({{1, 0}, {0, 1}, {1, 1}}, {0, 0});
  // legal: (0,0) d0, (1,0) d0, (0,1) d0 -> all tie at 0, lex first is (0,0)
  CHECK(evader_policy_greedy(s) == GridPoint{0, 0});
}

TEST_CASE("greedy evader symmetric tie-break") {
  auto s = make_state({{5, 10}, {15, 10}, {10, 3}}, {10, 10});
  GridPoint m = evader_policy_greedy(s);
  // maximin over {(9,10),(10,9),(10,10),(10,11),(11,10)}; verify by scan
  auto legal = enumerate_legal_moves(s, AgentId::evader());
  int best = -1;
  for (GridPoint c : legal) {
    int mind = 1 << 20;
    for (GridPoint p : s.pursuers)
      mind = std::min(mind, manhattan_distance(c, p));
    best = std::max(best, mind);
  }
  int got = 1 << 20;
  for (GridPoint p : s.pursuers)
    got = std::min(got, manhattan_distance(m, p));
  CHECK(got == best);
  for (GridPoint c : legal) {
    if (c >= m) continue;
    int mind = 1 << 20;
    for (GridPoint p : s.pursuers)
      mind = std::min(mind, manhattan_distance(c, p));
    CHECK(mind < best);  // nothing lex-smaller ties the maximin
  }
}
