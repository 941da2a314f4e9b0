#include "lp/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace lp {

std::string OraclePolicy::select(
    const RetrievalQuery&, const std::vector<const FunctionSpec*>& candidates,
    const TaskContext& ctx) {
  for (const FunctionSpec* s : candidates)
    if (s->stage_tag == ctx.stage) return s->name;
  throw SelectionFault("no candidate tagged for stage " +
                       std::to_string(ctx.stage));
}

NoisyPolicy::NoisyPolicy(double epsilon, std::uint64_t seed)
    : epsilon_(epsilon), rng_(seed) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in [0, 1]");
}

std::string NoisyPolicy::name() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "noisy:%g", epsilon_);
  return buf;
}

std::string NoisyPolicy::select(
    const RetrievalQuery& q, const std::vector<const FunctionSpec*>& candidates,
    const TaskContext& ctx) {
  std::string oracle_choice = oracle_.select(q, candidates, ctx);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng_) >= epsilon_ || candidates.size() < 2) return oracle_choice;

  std::vector<std::string> others;
  for (const FunctionSpec* s : candidates)
    if (s->name != oracle_choice) others.push_back(s->name);
  return others[rng_() % others.size()];
}

RemoteSelectorPolicy::RemoteSelectorPolicy(std::string host, int port,
                                           int timeout_seconds)
    : host_(std::move(host)), port_(port), timeout_seconds_(timeout_seconds) {}

std::string RemoteSelectorPolicy::name() const {
  return "remote:" + host_ + ":" + std::to_string(port_);
}

std::string RemoteSelectorPolicy::select(
    const RetrievalQuery& q, const std::vector<const FunctionSpec*>& candidates,
    const TaskContext& ctx) {
  nlohmann::json req;
  req["instructions"] = ctx.instructions;
  req["query"] = q.text();
  req["stage"] = ctx.stage;
  nlohmann::json cands = nlohmann::json::array();
  for (const FunctionSpec* s : candidates) {
    cands.push_back({{"name", s->name},
                     {"stage_tag", s->stage_tag},
                     {"rule_explanation", s->manual.rule_explanation},
                     {"code_comment", s->manual.code_comment},
                     {"invocation_stage_description",
                      s->manual.invocation_stage_description},
                     {"usage_example", s->manual.usage_example}});
  }
  req["candidates"] = cands;
  std::string body = req.dump();

  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client cli(host_, port_);
    cli.set_connection_timeout(timeout_seconds_, 0);
    cli.set_read_timeout(timeout_seconds_, 0);
    auto res = cli.Post("/select", body, "application/json");
    if (!res || res->status != 200) continue;
    try {
      std::string name =
          nlohmann::json::parse(res->body).at("name").get<std::string>();
      for (const FunctionSpec* s : candidates)
        if (s->name == name) return name;
    } catch (const std::exception&) {
      // malformed reply, retry once
    }
  }
  throw SelectionFault("remote selector gave no usable answer");
}

// ---- KD corpus --------------------------------------------------------------

std::string MemorizedCorpus::state_key(const GameState& state) {
  std::ostringstream os;
  os << 'P';
  for (const GridPoint& p : state.pursuers)
    os << '(' << p.x << ',' << p.y << ')';
  os << 'E' << '(' << state.evader.x << ',' << state.evader.y << ')';
  return os.str();
}

void MemorizedCorpus::add(const GameState& state,
                          std::vector<GridPoint> moves) {
  records_.push_back({state_key(state), state, std::move(moves)});
}

void MemorizedCorpus::finalize() {
  std::sort(records_.begin(), records_.end(),
            [](const Record& a, const Record& b) { return a.key < b.key; });
  records_.erase(std::unique(records_.begin(), records_.end(),
                             [](const Record& a, const Record& b) {
                               return a.key == b.key;
                             }),
                 records_.end());
}

std::vector<GridPoint> KdMimicPolicy::propose(const GameState& state) const {
  const MemorizedCorpus::Record& rec = corpus_.lookup(state);
  std::vector<GridPoint> moves;
  moves.reserve(state.pursuers.size());
  for (std::size_t i = 0; i < state.pursuers.size(); ++i) {
    GridPoint target = state.pursuers[i];
    if (i < rec.moves.size() && i < rec.state.pursuers.size()) {
      target.x += rec.moves[i].x - rec.state.pursuers[i].x;
      target.y += rec.moves[i].y - rec.state.pursuers[i].y;
    }
    moves.push_back(target);
  }
  return moves;
}

const MemorizedCorpus::Record& MemorizedCorpus::lookup(
    const GameState& state) const {
  if (records_.empty()) throw std::logic_error("empty memorized corpus");

  std::string key = state_key(state);
  auto it = std::lower_bound(
      records_.begin(), records_.end(), key,
      [](const Record& r, const std::string& k) { return r.key < k; });
  if (it != records_.end() && it->key == key) return *it;

  auto state_distance = [&](const Record& r) {
    int d = manhattan_distance(r.state.evader, state.evader);
    std::size_t n = std::min(r.state.pursuers.size(), state.pursuers.size());
    for (std::size_t i = 0; i < n; ++i)
      d += manhattan_distance(r.state.pursuers[i], state.pursuers[i]);
    return d;
  };

  const Record* best = &records_.front();
  int best_dist = std::numeric_limits<int>::max();
  for (const Record& r : records_) {  // records are key-sorted: first win = lex
    int d = state_distance(r);
    if (d < best_dist) {
      best_dist = d;
      best = &r;
    }
  }
  return *best;
}

}  // namespace lp
