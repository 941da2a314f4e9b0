#include "lp/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lp {

MetricsReport aggregate_outcomes(const std::vector<GameOutcome>& outcomes) {
  MetricsReport r;
  r.episodes = static_cast<int>(outcomes.size());
  long step_sum = 0;
  for (const GameOutcome& o : outcomes) {
    switch (o.kind) {
      case OutcomeKind::Success:
        ++r.successes;
        step_sum += o.steps;
        break;
      case OutcomeKind::FailureNoViolation: ++r.failures_no_violation; break;
      case OutcomeKind::FailureWithViolation: ++r.failures_with_violation; break;
    }
  }
  r.outcomes = outcomes;
  if (r.episodes > 0) {
    r.success_rate = static_cast<double>(r.successes) / r.episodes;
    r.failure_no_violation_rate =
        static_cast<double>(r.failures_no_violation) / r.episodes;
    r.failure_with_violation_rate =
        static_cast<double>(r.failures_with_violation) / r.episodes;
  }
  if (r.successes > 0) {
    r.has_avg_steps = true;
    r.avg_steps_of_success = static_cast<double>(step_sum) / r.successes;
  }
  return r;
}

namespace {

struct ParsedPolicy {
  std::unique_ptr<SelectorPolicy> selector;
  std::unique_ptr<KdMimicPolicy> kd;
};

ParsedPolicy make_policy(const std::string& spec, const TournamentConfig& cfg,
                         const Planner& planner, const TaskSpec& eval_task) {
  ParsedPolicy p;
  if (spec == "oracle") {
    p.selector = std::make_unique<OraclePolicy>();
    return p;
  }
  if (spec.rfind("noisy:", 0) == 0) {
    p.selector = std::make_unique<NoisyPolicy>(std::stod(spec.substr(6)));
    return p;
  }
  if (spec.rfind("remote:", 0) == 0) {
    std::string rest = spec.substr(7);
    auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("remote policy needs host:port");
    p.selector = std::make_unique<RemoteSelectorPolicy>(
        rest.substr(0, colon), std::stoi(rest.substr(colon + 1)));
    return p;
  }
  if (spec == "kd" || spec.rfind("kd:", 0) == 0) {
    std::uint64_t teacher_seed = cfg.seed;
    int teacher_episodes = cfg.kd_teacher_episodes;
    if (spec.size() > 3) {
      std::istringstream in(spec.substr(3));
      std::string a, b;
      std::getline(in, a, ':');
      std::getline(in, b, ':');
      teacher_seed = std::stoull(a);
      if (!b.empty()) teacher_episodes = std::stoi(b);
    }
    // the teacher trains without the emergency; the restricted area is a
    // deployment-time surprise for the KD baseline
    TaskSpec teacher_task = eval_task;
    teacher_task.board.restricted_area.reset();
    teacher_task.emergency_triggers.clear();
    teacher_task.fixed_pursuers.reset();
    teacher_task.fixed_evader.reset();
    OraclePolicy teacher;
    MemorizedCorpus corpus = build_corpus(planner, teacher_task, teacher,
                                          teacher_episodes, teacher_seed);
    char name[64];
    std::snprintf(name, sizeof name, "kd:%llu:%d",
                  static_cast<unsigned long long>(teacher_seed),
                  teacher_episodes);
    p.kd = std::make_unique<KdMimicPolicy>(std::move(corpus), name);
    return p;
  }
  throw std::invalid_argument("unknown policy spec: " + spec);
}

}  // namespace

MetricsReport run_tournament(const TournamentConfig& cfg,
                             const FunctionBase& base, const Retriever& retr,
                             std::vector<EpisodeTrace>* traces) {
  if (cfg.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  Planner planner(base, retr, PlannerConfig{cfg.top_k});
  TaskSpec task = default_task(cfg.board, cfg.emergency);
  ParsedPolicy policy = make_policy(cfg.policy, cfg, planner, task);

  std::vector<GameOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(cfg.episodes));
  for (int e = 0; e < cfg.episodes; ++e) {
    std::uint64_t ep_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(e));
    EpisodeTrace trace = policy.kd
                             ? planner.run_episode(task, *policy.kd, ep_seed)
                             : planner.run_episode(task, *policy.selector,
                                                   ep_seed);
    outcomes.push_back(trace.outcome);
    if (traces) traces->push_back(std::move(trace));
  }
  return aggregate_outcomes(outcomes);
}

EpisodeTrace rerun_trace(const EpisodeTrace& trace, const FunctionBase& base,
                         const Retriever& retr) {
  Planner planner(base, retr, PlannerConfig{trace.top_k});
  TournamentConfig cfg;
  cfg.seed = trace.seed;
  cfg.board = trace.task.board;
  ParsedPolicy policy =
      make_policy(trace.policy_spec, cfg, planner, trace.task);
  return policy.kd ? planner.run_episode(trace.task, *policy.kd, trace.seed)
                   : planner.run_episode(trace.task, *policy.selector,
                                         trace.seed);
}

std::string report_table(const MetricsReport& r) {
  std::ostringstream os;
  char line[128];
  os << "Outcome                  Rate      Episodes\n";
  std::snprintf(line, sizeof line, "Success                  %6.2f%%  %8d\n",
                100.0 * r.success_rate, r.successes);
  os << line;
  std::snprintf(line, sizeof line, "Failure w/o Violation    %6.2f%%  %8d\n",
                100.0 * r.failure_no_violation_rate, r.failures_no_violation);
  os << line;
  std::snprintf(line, sizeof line, "Failure with Violation   %6.2f%%  %8d\n",
                100.0 * r.failure_with_violation_rate,
                r.failures_with_violation);
  os << line;
  if (r.has_avg_steps) {
    std::snprintf(line, sizeof line, "Average Steps of Success %8.2f\n",
                  r.avg_steps_of_success);
    os << line;
  } else {
    os << "Average Steps of Success      n/a\n";
  }
  return os.str();
}

std::string report_json(const MetricsReport& r, const TournamentConfig& cfg) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"episodes", cfg.episodes}, {"seed", cfg.seed},
      {"policy", cfg.policy},     {"emergency", cfg.emergency},
      {"top_k", cfg.top_k},       {"board_width", cfg.board.width},
      {"board_height", cfg.board.height},
  };
  j["success_rate"] = r.success_rate;
  j["failure_no_violation_rate"] = r.failure_no_violation_rate;
  j["failure_with_violation_rate"] = r.failure_with_violation_rate;
  if (r.has_avg_steps)
    j["avg_steps_of_success"] = r.avg_steps_of_success;
  else
    j["avg_steps_of_success"] = nullptr;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const GameOutcome& o : r.outcomes)
    outs.push_back({{"kind", to_string(o.kind)}, {"steps", o.steps}});
  j["outcomes"] = outs;
  return j.dump(2) + "\n";
}

double max_entropy(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("max_entropy requires n >= 1");
  return std::log(static_cast<double>(n));
}

double empirical_entropy(const std::vector<double>& dist) {
  double sum = 0.0;
  for (double p : dist) {
    if (p < 0.0 || !std::isfinite(p))
      throw std::invalid_argument("probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("probabilities must sum to 1");
  double h = 0.0;
  for (double p : dist)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

}  // namespace lp
