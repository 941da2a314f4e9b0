#include "lp/function_base.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lp {

StageKind kind_of(const StageValue& v) {
  return static_cast<StageKind>(v.index());
}

const char* to_string(StageKind k) {
  switch (k) {
    case StageKind::TaskContext: return "TaskContext";
    case StageKind::DistanceTable: return "DistanceTable";
    case StageKind::MoveCandidates: return "MoveCandidates";
    case StageKind::ChosenMoves: return "ChosenMoves";
  }
  return "?";
}

static StageKind stage_kind_from_string(const std::string& s) {
  if (s == "TaskContext") return StageKind::TaskContext;
  if (s == "DistanceTable") return StageKind::DistanceTable;
  if (s == "MoveCandidates") return StageKind::MoveCandidates;
  if (s == "ChosenMoves") return StageKind::ChosenMoves;
  throw std::invalid_argument("unknown stage kind: " + s);
}

bool FunctionSpec::accepts(StageKind k) const {
  return std::find(input_kinds.begin(), input_kinds.end(), k) !=
         input_kinds.end();
}

std::string FunctionSpec::document_text() const {
  std::string doc = name;
  for (const std::string* f :
       {&manual.rule_explanation, &manual.code_comment,
        &manual.invocation_stage_description, &manual.usage_example}) {
    doc += ' ';
    doc += *f;
  }
  return doc;
}

FunctionBase::FunctionBase(std::vector<FunctionSpec> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const FunctionSpec& e = entries_[i];
    if (e.name.empty()) throw std::invalid_argument("unnamed function spec");
    if (e.stage_tag < 1.0)
      throw std::invalid_argument("stage_tag < 1 for " + e.name);
    if (e.manual.rule_explanation.empty() || e.manual.code_comment.empty() ||
        e.manual.invocation_stage_description.empty() ||
        e.manual.usage_example.empty())
      throw std::invalid_argument("incomplete manual for " + e.name);
    for (std::size_t j = 0; j < i; ++j)
      if (entries_[j].name == e.name)
        throw std::invalid_argument("duplicate function name " + e.name);
  }
}

const FunctionSpec* FunctionBase::find(std::string_view name) const {
  for (const FunctionSpec& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

const FunctionSpec& FunctionBase::at(std::string_view name) const {
  const FunctionSpec* p = find(name);
  if (!p) throw std::out_of_range("no such function: " + std::string(name));
  return *p;
}

// ---- shipped stage functions ------------------------------------------------

DistanceTable compute_distances(const TaskContext& ctx) {
  DistanceTable out;
  out.state = ctx.state;
  out.distances.reserve(ctx.state.pursuers.size());
  for (const GridPoint& p : ctx.state.pursuers)
    out.distances.push_back(manhattan_distance(p, ctx.state.evader));
  return out;
}

MoveCandidates filter_valid_moves(const StageValue& value) {
  const GameState* state = nullptr;
  if (const auto* ctx = std::get_if<TaskContext>(&value)) state = &ctx->state;
  else if (const auto* dt = std::get_if<DistanceTable>(&value)) state = &dt->state;
  else
    throw std::invalid_argument(
        std::string("filter_valid_moves expects TaskContext or DistanceTable, "
                    "got ") + to_string(kind_of(value)));

  MoveCandidates out;
  out.state = *state;
  out.per_pursuer.reserve(state->pursuers.size());
  for (std::size_t i = 0; i < state->pursuers.size(); ++i)
    out.per_pursuer.push_back(enumerate_legal_moves(
        *state, AgentId::pursuer(static_cast<int>(i)),
        RestrictedFilter::Ignore));
  return out;
}

MoveCandidates filter_restricted_cells(const MoveCandidates& value,
                                       const Rect& area) {
  MoveCandidates out;
  out.state = value.state;
  out.per_pursuer.reserve(value.per_pursuer.size());
  for (const auto& cands : value.per_pursuer) {
    std::vector<GridPoint> kept;
    for (const GridPoint& p : cands)
      if (!area.contains(p)) kept.push_back(p);
    out.per_pursuer.push_back(std::move(kept));
  }
  return out;
}

ChosenMoves select_best_move(const MoveCandidates& value) {
  ChosenMoves out;
  out.moves.reserve(value.per_pursuer.size());
  for (std::size_t i = 0; i < value.per_pursuer.size(); ++i) {
    const auto& cands = value.per_pursuer[i];
    if (cands.empty())
      throw std::invalid_argument("empty candidate list for pursuer " +
                                  std::to_string(i));
    GridPoint best = cands.front();
    int best_dist = std::numeric_limits<int>::max();
    for (const GridPoint& c : cands) {
      int d = manhattan_distance(c, value.state.evader);
      if (d < best_dist) {  // candidates are lex-sorted, first win = lex pick
        best_dist = d;
        best = c;
      }
    }
    out.moves.push_back(best);
  }
  return out;
}

FunctionSpec make_restricted_area_filter(const Rect& area) {
  FunctionSpec spec;
  spec.name = "filter_restricted_cells";
  spec.stage_tag = 2.5;
  spec.manual = ManualEntry{
      "Emergency rule: a rectangular restricted area of forbidden cells has "
      "been placed on the board and no pursuer may enter it. Remove every "
      "candidate coordinate that lies inside the restricted rectangle.",
      "Coordinate filtering function: drops candidates contained in the "
      "restricted area rectangle, keeping the remaining coordinates in order.",
      "Invoked between filter_valid_moves and select_best_move whenever a "
      "restricted area emergency is active.",
      "filter_restricted_cells(candidates) -> candidates excluding the "
      "restricted area, e.g. {(8,8),(7,8)} with area (8..12,8..12) -> {(7,8)}."};
  spec.input_kinds = {StageKind::MoveCandidates};
  spec.output_kind = StageKind::MoveCandidates;
  spec.impl = [area](const StageValue& v) -> StageValue {
    const auto* mc = std::get_if<MoveCandidates>(&v);
    if (!mc)
      throw std::invalid_argument(
          std::string("filter_restricted_cells expects MoveCandidates, got ") +
          to_string(kind_of(v)));
    return filter_restricted_cells(*mc, area);
  };
  return spec;
}

namespace {

StageValue compute_distances_impl(const StageValue& v) {
  const auto* ctx = std::get_if<TaskContext>(&v);
  if (!ctx)
    throw std::invalid_argument(
        std::string("compute_distances expects TaskContext, got ") +
        to_string(kind_of(v)));
  return compute_distances(*ctx);
}

StageValue filter_valid_moves_impl(const StageValue& v) {
  return filter_valid_moves(v);
}

// Base-resident variant: the rectangle is read off the board config at call
// time; without an active restricted area this is the identity.
StageValue filter_restricted_impl(const StageValue& v) {
  const auto* mc = std::get_if<MoveCandidates>(&v);
  if (!mc)
    throw std::invalid_argument(
        std::string("filter_restricted_cells expects MoveCandidates, got ") +
        to_string(kind_of(v)));
  if (!mc->state.config.restricted_area) return *mc;
  return filter_restricted_cells(*mc, *mc->state.config.restricted_area);
}

StageValue select_best_move_impl(const StageValue& v) {
  const auto* mc = std::get_if<MoveCandidates>(&v);
  if (!mc)
    throw std::invalid_argument(
        std::string("select_best_move expects MoveCandidates, got ") +
        to_string(kind_of(v)));
  return select_best_move(*mc);
}

std::function<StageValue(const StageValue&)> impl_for(const std::string& name) {
  static const std::map<std::string,
                        std::function<StageValue(const StageValue&)>>
      registry = {
          {"compute_distances", compute_distances_impl},
          {"filter_valid_moves", filter_valid_moves_impl},
          {"filter_restricted_cells", filter_restricted_impl},
          {"select_best_move", select_best_move_impl},
      };
  auto it = registry.find(name);
  if (it == registry.end())
    throw std::invalid_argument("no registered implementation for " + name);
  return it->second;
}

}  // namespace

FunctionBase build_default_base() {
  std::vector<FunctionSpec> specs;

  {
    FunctionSpec s;
    s.name = "compute_distances";
    s.stage_tag = 1.0;
    s.manual = ManualEntry{
        "Compute the Manhattan distance from each pursuer to the evader. The "
        "distance between two cells is the sum of the absolute differences of "
        "their x and y coordinates.",
        "Builds the distance table: one integer per pursuer giving its "
        "current Manhattan distance to the evader.",
        "Invoked at stage 1, before candidate moves are enumerated.",
        "compute_distances(context) -> distance table, e.g. pursuers at "
        "(3,8),(14,19),(17,2) with evader at (20,18) -> [27, 7, 19]."};
    s.input_kinds = {StageKind::TaskContext};
    s.output_kind = StageKind::DistanceTable;
    s.impl = compute_distances_impl;
    specs.push_back(std::move(s));
  }
  {
    FunctionSpec s;
    s.name = "filter_valid_moves";
    s.stage_tag = 2.0;
    s.manual = ManualEntry{
        "Enumerate the valid moves for each pursuer: every board cell "
        "reachable within the per-step movement budget of two units, staying "
        "inside the board bounds.",
        "Produces the candidate move lists, one list of reachable coordinates "
        "per pursuer, sorted lexicographically.",
        "Invoked at stage 2, after the distance table is computed.",
        "filter_valid_moves(distances) -> candidate lists, e.g. a pursuer at "
        "(0,0) with budget 2 has the 6 candidates (0,0),(0,1),(0,2),(1,0),"
        "(1,1),(2,0)."};
    s.input_kinds = {StageKind::TaskContext, StageKind::DistanceTable};
    s.output_kind = StageKind::MoveCandidates;
    s.impl = filter_valid_moves_impl;
    specs.push_back(std::move(s));
  }
  {
    FunctionSpec s = make_restricted_area_filter(Rect{});
    s.impl = filter_restricted_impl;  // rectangle comes from the board config
    specs.push_back(std::move(s));
  }
  {
    FunctionSpec s;
    s.name = "select_best_move";
    s.stage_tag = 3.0;
    s.manual = ManualEntry{
        "Select the best move for each pursuer: among its candidate "
        "coordinates, choose the one closest to the evader so the pursuers "
        "close in and capture the evader.",
        "Greedy chooser: picks the candidate with the smallest Manhattan "
        "distance to the evader, breaking ties lexicographically.",
        "Invoked at stage 3, the final stage; its output is the chosen move "
        "for every pursuer this step.",
        "select_best_move(candidates) -> chosen moves, e.g. a pursuer at "
        "(0,0) chasing an evader at (20,18) moves to (0,2)."};
    s.input_kinds = {StageKind::MoveCandidates};
    s.output_kind = StageKind::ChosenMoves;
    s.impl = select_best_move_impl;
    specs.push_back(std::move(s));
  }

  return FunctionBase(std::move(specs));
}

// ---- serialization ----------------------------------------------------------

std::string serialize_function_base(const FunctionBase& base) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const FunctionSpec& s : base.entries()) {
    nlohmann::ordered_json rec;
    rec["name"] = s.name;
    rec["stage_tag"] = s.stage_tag;
    nlohmann::ordered_json kinds = nlohmann::ordered_json::array();
    for (StageKind k : s.input_kinds) kinds.push_back(to_string(k));
    rec["input_kinds"] = kinds;
    rec["output_kind"] = to_string(s.output_kind);
    rec["manual"] = {
        {"rule_explanation", s.manual.rule_explanation},
        {"code_comment", s.manual.code_comment},
        {"invocation_stage_description", s.manual.invocation_stage_description},
        {"usage_example", s.manual.usage_example},
    };
    root.push_back(std::move(rec));
  }
  return root.dump(2) + "\n";
}

void save_function_base(const FunctionBase& base,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << serialize_function_base(base);
}

FunctionBase parse_function_base(const std::string& text) {
  nlohmann::json root = nlohmann::json::parse(text);
  std::vector<FunctionSpec> specs;
  for (const auto& rec : root) {
    FunctionSpec s;
    s.name = rec.at("name").get<std::string>();
    s.stage_tag = rec.at("stage_tag").get<double>();
    for (const auto& k : rec.at("input_kinds"))
      s.input_kinds.push_back(stage_kind_from_string(k.get<std::string>()));
    s.output_kind =
        stage_kind_from_string(rec.at("output_kind").get<std::string>());
    const auto& m = rec.at("manual");
    s.manual.rule_explanation = m.at("rule_explanation").get<std::string>();
    s.manual.code_comment = m.at("code_comment").get<std::string>();
    s.manual.invocation_stage_description =
        m.at("invocation_stage_description").get<std::string>();
    s.manual.usage_example = m.at("usage_example").get<std::string>();
    s.impl = impl_for(s.name);
    specs.push_back(std::move(s));
  }
  return FunctionBase(std::move(specs));
}

FunctionBase load_function_base(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_function_base(ss.str());
}

}  // namespace lp
