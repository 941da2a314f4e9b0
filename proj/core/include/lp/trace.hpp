#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lp/planner.hpp"

namespace lp {

// Line-delimited records: a header line, one line per step, an outcome line.
std::string serialize_trace(const EpisodeTrace& trace);
EpisodeTrace parse_trace(const std::string& text);

void save_trace(const EpisodeTrace& trace, const std::filesystem::path& path);
EpisodeTrace load_trace(const std::filesystem::path& path);

// State before each step plus the terminal state, recovered by folding the
// recorded moves from the initial positions.
std::vector<GameState> replay_states(const EpisodeTrace& trace);

// Writes <prefix>_positions.tsv (agent, step, x, y) and <prefix>_visits.tsv
// (agent, x, y, count) for plotting.
void emit_trajectories(const EpisodeTrace& trace,
                       const std::filesystem::path& out_dir,
                       const std::string& prefix = "trace");

}  // namespace lp
