#include "lp/trace.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lp {

namespace {

using ojson = nlohmann::ordered_json;

ojson point_json(GridPoint p) { return ojson::array({p.x, p.y}); }

GridPoint point_from(const nlohmann::json& j) {
  return GridPoint{j.at(0).get<int>(), j.at(1).get<int>()};
}

ojson board_json(const BoardConfig& b) {
  ojson j;
  j["width"] = b.width;
  j["height"] = b.height;
  j["pursuer_budget"] = b.pursuer_budget;
  j["evader_budget"] = b.evader_budget;
  j["capture_radius"] = b.capture_radius;
  j["step_limit"] = b.step_limit;
  j["violation_limit"] = b.violation_limit;
  j["pursuer_count"] = b.pursuer_count;
  j["strict_move"] = b.strict_move;
  if (b.restricted_area) {
    const Rect& r = *b.restricted_area;
    j["restricted_area"] = ojson::array({r.x0, r.y0, r.x1, r.y1});
  }
  return j;
}

BoardConfig board_from(const nlohmann::json& j) {
  BoardConfig b;
  b.width = j.at("width").get<int>();
  b.height = j.at("height").get<int>();
  b.pursuer_budget = j.at("pursuer_budget").get<int>();
  b.evader_budget = j.at("evader_budget").get<int>();
  b.capture_radius = j.at("capture_radius").get<int>();
  b.step_limit = j.at("step_limit").get<int>();
  b.violation_limit = j.at("violation_limit").get<int>();
  b.pursuer_count = j.at("pursuer_count").get<int>();
  b.strict_move = j.at("strict_move").get<bool>();
  if (j.contains("restricted_area")) {
    const auto& r = j.at("restricted_area");
    b.restricted_area = Rect{r.at(0).get<int>(), r.at(1).get<int>(),
                             r.at(2).get<int>(), r.at(3).get<int>()};
  }
  return b;
}

}  // namespace

std::string serialize_trace(const EpisodeTrace& trace) {
  std::ostringstream out;

  ojson header;
  header["type"] = "header";
  header["seed"] = trace.seed;
  header["policy"] = trace.policy_spec;
  header["top_k"] = trace.top_k;
  header["instructions"] = trace.task.instructions;
  header["board"] = board_json(trace.task.board);
  header["emergency_triggers"] = trace.task.emergency_triggers;
  {
    ojson ps = ojson::array();
    for (GridPoint p : trace.initial_pursuers) ps.push_back(point_json(p));
    header["initial_pursuers"] = ps;
    header["initial_evader"] = point_json(trace.initial_evader);
  }
  header["fixed_start"] = trace.task.fixed_pursuers.has_value();
  out << header.dump() << '\n';

  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepRecord& s = trace.steps[i];
    ojson j;
    j["type"] = "step";
    j["index"] = i;
    ojson stages = ojson::array();
    for (const StageRecord& st : s.stages) {
      ojson sj;
      sj["tag"] = st.stage_tag;
      ojson cands = ojson::array();
      for (const auto& [name, score] : st.candidates.items)
        cands.push_back(ojson::array({name, score}));
      sj["candidates"] = cands;
      sj["selected"] = st.selected;
      sj["fault"] = st.selection_fault;
      sj["in"] = st.input_digest;
      sj["out"] = st.output_digest;
      stages.push_back(std::move(sj));
    }
    j["stages"] = stages;
    ojson moves = ojson::array();
    for (GridPoint p : s.proposed_moves) moves.push_back(point_json(p));
    j["moves"] = moves;
    ojson verdicts = ojson::array();
    for (MoveVerdict v : s.verdicts)
      verdicts.push_back(v == MoveVerdict::Legal ? "legal" : "illegal");
    j["verdicts"] = verdicts;
    j["stalled"] = s.stalled;
    j["evader"] = point_json(s.evader_move);
    j["evader_moved"] = s.evader_moved;
    j["violations"] = s.violations;
    j["fault"] = s.selection_fault;
    out << j.dump() << '\n';
  }

  ojson tail;
  tail["type"] = "outcome";
  tail["kind"] = to_string(trace.outcome.kind);
  tail["steps"] = trace.outcome.steps;
  out << tail.dump() << '\n';
  return out.str();
}

EpisodeTrace parse_trace(const std::string& text) {
  EpisodeTrace trace;
  std::istringstream in(text);
  std::string line;
  bool have_header = false, have_outcome = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      trace.seed = j.at("seed").get<std::uint64_t>();
      trace.policy_spec = j.at("policy").get<std::string>();
      trace.top_k = j.at("top_k").get<std::size_t>();
      trace.task.instructions = j.at("instructions").get<std::string>();
      trace.task.board = board_from(j.at("board"));
      trace.task.emergency_triggers =
          j.at("emergency_triggers").get<std::vector<std::string>>();
      for (const auto& p : j.at("initial_pursuers"))
        trace.initial_pursuers.push_back(point_from(p));
      trace.initial_evader = point_from(j.at("initial_evader"));
      if (j.at("fixed_start").get<bool>()) {
        trace.task.fixed_pursuers = trace.initial_pursuers;
        trace.task.fixed_evader = trace.initial_evader;
      }
      // the stage plan is not serialized: rebuild the default plan
      TaskSpec defaults = default_task(trace.task.board, false);
      trace.task.stages = defaults.stages;
      have_header = true;
    } else if (type == "step") {
      StepRecord s;
      for (const auto& sj : j.at("stages")) {
        StageRecord st;
        st.stage_tag = sj.at("tag").get<double>();
        for (const auto& c : sj.at("candidates"))
          st.candidates.items.emplace_back(c.at(0).get<std::string>(),
                                           c.at(1).get<double>());
        st.selected = sj.at("selected").get<std::string>();
        st.selection_fault = sj.at("fault").get<bool>();
        st.input_digest = sj.at("in").get<std::uint64_t>();
        st.output_digest = sj.at("out").get<std::uint64_t>();
        s.stages.push_back(std::move(st));
      }
      for (const auto& p : j.at("moves"))
        s.proposed_moves.push_back(point_from(p));
      for (const auto& v : j.at("verdicts"))
        s.verdicts.push_back(v.get<std::string>() == "legal"
                                 ? MoveVerdict::Legal
                                 : MoveVerdict::Illegal);
      s.stalled = j.at("stalled").get<std::vector<int>>();
      s.evader_move = point_from(j.at("evader"));
      s.evader_moved = j.at("evader_moved").get<bool>();
      s.violations = j.at("violations").get<int>();
      s.selection_fault = j.at("fault").get<bool>();
      trace.steps.push_back(std::move(s));
    } else if (type == "outcome") {
      trace.outcome.kind = outcome_kind_from_string(j.at("kind").get<std::string>());
      trace.outcome.steps = j.at("steps").get<int>();
      have_outcome = true;
    } else {
      throw std::invalid_argument("unknown trace record type: " + type);
    }
  }
  if (!have_header || !have_outcome)
    throw std::invalid_argument("trace missing header or outcome record");
  return trace;
}

void save_trace(const EpisodeTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << serialize_trace(trace);
}

EpisodeTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::vector<GameState> replay_states(const EpisodeTrace& trace) {
  std::vector<GameState> states;
  GameState state;
  state.config = trace.task.board;
  state.pursuers = trace.initial_pursuers;
  state.evader = trace.initial_evader;
  states.push_back(state);

  for (const StepRecord& rec : trace.steps) {
    for (std::size_t i = 0; i < rec.verdicts.size(); ++i) {
      auto [after, verdict] = apply_move(
          state, AgentId::pursuer(static_cast<int>(i)), rec.proposed_moves[i]);
      state = std::move(after);
    }
    if (rec.evader_moved) {
      auto [after, verdict] =
          apply_move(state, AgentId::evader(), rec.evader_move);
      state = std::move(after);
    }
    state.step_count += 1;
    states.push_back(state);
  }
  return states;
}

void emit_trajectories(const EpisodeTrace& trace,
                       const std::filesystem::path& out_dir,
                       const std::string& prefix) {
  std::filesystem::create_directories(out_dir);
  std::vector<GameState> states = replay_states(trace);

  std::ofstream pos(out_dir / (prefix + "_positions.tsv"));
  if (!pos) throw std::runtime_error("cannot write trajectory positions");
  pos << "agent\tstep\tx\ty\n";

  std::map<std::pair<std::string, GridPoint>, int> visits;
  auto agent_name = [](std::size_t i, bool evader) {
    return evader ? std::string("evader") : "pursuer" + std::to_string(i);
  };
  for (std::size_t t = 0; t < states.size(); ++t) {
    const GameState& s = states[t];
    for (std::size_t i = 0; i < s.pursuers.size(); ++i) {
      pos << agent_name(i, false) << '\t' << t << '\t' << s.pursuers[i].x
          << '\t' << s.pursuers[i].y << '\n';
      visits[{agent_name(i, false), s.pursuers[i]}] += 1;
    }
    pos << "evader\t" << t << '\t' << s.evader.x << '\t' << s.evader.y << '\n';
    visits[{agent_name(0, true), s.evader}] += 1;
  }

  std::ofstream vis(out_dir / (prefix + "_visits.tsv"));
  if (!vis) throw std::runtime_error("cannot write trajectory visits");
  vis << "agent\tx\ty\tcount\n";
  for (const auto& [key, count] : visits)
    vis << key.first << '\t' << key.second.x << '\t' << key.second.y << '\t'
        << count << '\n';
}

}  // namespace lp
