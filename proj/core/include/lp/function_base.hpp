#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lp/grid.hpp"

namespace lp {

// ---- stage values -----------------------------------------------------------

struct TaskContext {
  std::string instructions;
  GameState state;
  double stage = 1.0;  // stage tag the planner is currently executing
};

struct DistanceTable {
  std::vector<int> distances;  // per pursuer, to the evader
  GameState state;
};

struct MoveCandidates {
  std::vector<std::vector<GridPoint>> per_pursuer;
  GameState state;
};

struct ChosenMoves {
  std::vector<GridPoint> moves;  // one target per pursuer
};

using StageValue =
    std::variant<TaskContext, DistanceTable, MoveCandidates, ChosenMoves>;

enum class StageKind { TaskContext, DistanceTable, MoveCandidates, ChosenMoves };

StageKind kind_of(const StageValue& v);
const char* to_string(StageKind k);

// ---- function specs ---------------------------------------------------------

struct ManualEntry {
  std::string rule_explanation;
  std::string code_comment;
  std::string invocation_stage_description;
  std::string usage_example;
  bool operator==(const ManualEntry&) const = default;
};

struct FunctionSpec {
  std::string name;
  double stage_tag = 1.0;  // fractional tags slot between integer stages
  ManualEntry manual;
  std::vector<StageKind> input_kinds;  // accepted input variants
  StageKind output_kind = StageKind::ChosenMoves;
  std::function<StageValue(const StageValue&)> impl;

  bool accepts(StageKind k) const;
  // name + all manual fields, the retrieval document for this function
  std::string document_text() const;
};

class FunctionBase {
 public:
  FunctionBase() = default;
  explicit FunctionBase(std::vector<FunctionSpec> entries);

  const std::vector<FunctionSpec>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const FunctionSpec* find(std::string_view name) const;
  const FunctionSpec& at(std::string_view name) const;

 private:
  std::vector<FunctionSpec> entries_;
};

// ---- shipped stage functions ------------------------------------------------

DistanceTable compute_distances(const TaskContext& ctx);

// Accepts a TaskContext or a DistanceTable; restricted-area exclusion is NOT
// applied here, that is the emergency filter's job.
MoveCandidates filter_valid_moves(const StageValue& value);

MoveCandidates filter_restricted_cells(const MoveCandidates& value,
                                       const Rect& area);

// Per pursuer, the candidate closest to the evader, lex tie-break. Throws
// std::invalid_argument on an empty candidate list.
ChosenMoves select_best_move(const MoveCandidates& value);

// The base of Figure-style stage functions: compute_distances (stage 1),
// filter_valid_moves (stage 2), select_best_move (stage 3) and the
// restricted-area emergency filter (stage 2.5).
FunctionBase build_default_base();

// Builds the emergency filter bound to a concrete rectangle.
FunctionSpec make_restricted_area_filter(const Rect& area);

// ---- serialization ----------------------------------------------------------

std::string serialize_function_base(const FunctionBase& base);
void save_function_base(const FunctionBase& base,
                        const std::filesystem::path& path);
// Rebinds implementations by name from the built-in registry; throws on an
// unknown function name.
FunctionBase load_function_base(const std::filesystem::path& path);
FunctionBase parse_function_base(const std::string& text);

}  // namespace lp
