#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lp/planner.hpp"
#include "lp/trace.hpp"

namespace lp {

struct TournamentConfig {
  int episodes = 200;
  std::uint64_t seed = 0;
  std::string policy = "oracle";  // oracle | noisy:<eps> | kd[:<seed>:<n>] |
                                  // remote:<host>:<port>
  BoardConfig board;
  bool emergency = false;
  std::size_t top_k = 5;
  int kd_teacher_episodes = 221;
};

struct MetricsReport {
  int episodes = 0;
  int successes = 0;
  int failures_no_violation = 0;
  int failures_with_violation = 0;
  double success_rate = 0.0;
  double failure_no_violation_rate = 0.0;
  double failure_with_violation_rate = 0.0;
  bool has_avg_steps = false;  // false when no episode succeeded
  double avg_steps_of_success = 0.0;
  std::vector<GameOutcome> outcomes;
};

MetricsReport aggregate_outcomes(const std::vector<GameOutcome>& outcomes);

// Runs cfg.episodes seeded episodes; optionally collects the full traces.
MetricsReport run_tournament(const TournamentConfig& cfg,
                             const FunctionBase& base, const Retriever& retr,
                             std::vector<EpisodeTrace>* traces = nullptr);

// Re-runs a trace's (task, policy, seed) and returns the fresh trace; used by
// the replay command to check reproduction.
EpisodeTrace rerun_trace(const EpisodeTrace& trace, const FunctionBase& base,
                         const Retriever& retr);

std::string report_table(const MetricsReport& report);
std::string report_json(const MetricsReport& report,
                        const TournamentConfig& cfg);

// ---- entropy utilities ------------------------------------------------------

// ln(n); throws std::invalid_argument for n < 1.
double max_entropy(std::int64_t n);

// -sum p ln p with 0 ln 0 = 0; dist must be nonnegative and sum to 1 within
// 1e-9, otherwise throws std::invalid_argument.
double empirical_entropy(const std::vector<double>& dist);

}  // namespace lp
