// Command-line front end: episode runner, tournament aggregation, trace
// replay, plot-data emission, entropy bounds, and function-base inspection.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lp/function_base.hpp"
#include "lp/metrics.hpp"
#include "lp/planner.hpp"
#include "lp/retriever.hpp"
#include "lp/trace.hpp"

namespace {

struct BoardOpts {
  int width = 21;
  int height = 21;
  bool strict_move = false;

  lp::BoardConfig to_config() const {
    lp::BoardConfig b;
    b.width = width;
    b.height = height;
    b.strict_move = strict_move;
    return b;
  }
};

void add_board_opts(CLI::App* cmd, BoardOpts& opts) {
  cmd->add_option("--width", opts.width, "Board width in cells");
  cmd->add_option("--height", opts.height, "Board height in cells");
  cmd->add_flag("--strict-move", opts.strict_move,
                "Disallow staying in place");
}

std::vector<lp::GridPoint> parse_points(const std::vector<int>& flat) {
  if (flat.size() % 2 != 0)
    throw CLI::ValidationError("--fixed-start needs an even number of values");
  std::vector<lp::GridPoint> pts;
  for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
    pts.push_back({flat[i], flat[i + 1]});
  return pts;
}

int cmd_run(std::uint64_t seed, const std::string& policy, bool emergency,
            const BoardOpts& board, const std::vector<int>& fixed_start,
            const std::string& out) {
  lp::FunctionBase base = lp::build_default_base();
  lp::Retriever retriever(base, std::make_shared<lp::HashingEmbedder>());

  lp::TournamentConfig cfg;
  cfg.episodes = 1;
  cfg.seed = seed;
  cfg.policy = policy;
  cfg.emergency = emergency;
  cfg.board = board.to_config();

  // a single episode is a one-entry tournament; fixed starts go through the
  // task spec directly
  lp::Planner planner(base, retriever);
  lp::TaskSpec task = lp::default_task(cfg.board, emergency);
  if (!fixed_start.empty()) {
    auto pts = parse_points(fixed_start);
    if (pts.size() < 2)
      throw CLI::ValidationError("--fixed-start needs pursuers and an evader");
    task.fixed_evader = pts.back();
    pts.pop_back();
    task.fixed_pursuers = pts;
    task.board.pursuer_count = static_cast<int>(pts.size());
  }

  lp::EpisodeTrace trace;
  if (policy == "kd" || policy.rfind("kd:", 0) == 0) {
    std::vector<lp::EpisodeTrace> traces;
    lp::TournamentConfig one = cfg;
    lp::run_tournament(one, base, retriever, &traces);
    trace = std::move(traces.front());
  } else {
    std::unique_ptr<lp::SelectorPolicy> pol;
    if (policy == "oracle")
      pol = std::make_unique<lp::OraclePolicy>();
    else if (policy.rfind("noisy:", 0) == 0)
      pol = std::make_unique<lp::NoisyPolicy>(std::stod(policy.substr(6)));
    else if (policy.rfind("remote:", 0) == 0) {
      std::string rest = policy.substr(7);
      auto colon = rest.rfind(':');
      if (colon == std::string::npos)
        throw CLI::ValidationError("remote policy needs host:port");
      pol = std::make_unique<lp::RemoteSelectorPolicy>(
          rest.substr(0, colon), std::stoi(rest.substr(colon + 1)));
    } else {
      throw CLI::ValidationError("unknown policy: " + policy);
    }
    trace = planner.run_episode(task, *pol, seed);
  }

  std::cout << "outcome: " << lp::to_string(trace.outcome.kind);
  if (trace.outcome.kind == lp::OutcomeKind::Success)
    std::cout << " in " << trace.outcome.steps << " steps";
  std::cout << " (" << trace.steps.size() << " steps played)\n";
  if (!out.empty()) {
    lp::save_trace(trace, out);
    std::cout << "trace written to " << out << "\n";
  }
  return 0;
}

int cmd_tournament(const lp::TournamentConfig& cfg, const std::string& out) {
  lp::FunctionBase base = lp::build_default_base();
  lp::Retriever retriever(base, std::make_shared<lp::HashingEmbedder>());
  lp::MetricsReport report = lp::run_tournament(cfg, base, retriever);

  std::string table = lp::report_table(report);
  std::cout << table;
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream txt(std::filesystem::path(out) / "report.txt");
    txt << table;
    std::ofstream js(std::filesystem::path(out) / "report.json");
    js << lp::report_json(report, cfg);
    std::cout << "reports written to " << out << "\n";
  }
  return 0;
}

int cmd_replay(const std::string& trace_path) {
  lp::FunctionBase base = lp::build_default_base();
  lp::Retriever retriever(base, std::make_shared<lp::HashingEmbedder>());
  lp::EpisodeTrace original = lp::load_trace(trace_path);
  lp::EpisodeTrace fresh = lp::rerun_trace(original, base, retriever);

  bool outcome_ok = fresh.outcome == original.outcome;
  bool bytes_ok = lp::serialize_trace(fresh) == lp::serialize_trace(original);
  std::cout << "recorded outcome:   " << lp::to_string(original.outcome.kind)
            << "\n"
            << "replayed outcome:   " << lp::to_string(fresh.outcome.kind)
            << "\n"
            << "byte-identical:     " << (bytes_ok ? "yes" : "no") << "\n";
  if (!outcome_ok || !bytes_ok) {
    std::cerr << "replay mismatch\n";
    return 1;
  }
  return 0;
}

int cmd_plot_data(const std::string& trace_path, const std::string& out) {
  lp::EpisodeTrace trace = lp::load_trace(trace_path);
  lp::emit_trajectories(trace, out);
  std::cout << "plot data written to " << out << "\n";
  return 0;
}

int cmd_entropy(std::int64_t k, std::int64_t m) {
  double hk = lp::max_entropy(k);
  double hm = lp::max_entropy(m);
  std::cout << "max selection entropy  (n=" << k << "): " << hk << " nats\n"
            << "max generation entropy (n=" << m << "): " << hm << " nats\n";
  if (hk < hm)
    std::cout << "selection bound is lower by " << (hm - hk) << " nats\n";
  return 0;
}

int cmd_base(const std::string& out, const std::string& validate) {
  if (!validate.empty()) {
    lp::FunctionBase loaded = lp::load_function_base(validate);
    std::string round = lp::serialize_function_base(loaded);
    std::ifstream in(validate);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (round != ss.str()) {
      std::cerr << "function base file is not canonical\n";
      return 1;
    }
    std::cout << "valid function base with " << loaded.size() << " entries\n";
    return 0;
  }
  lp::FunctionBase base = lp::build_default_base();
  if (!out.empty()) {
    lp::save_function_base(base, out);
    std::cout << "function base written to " << out << "\n";
  } else {
    std::cout << lp::serialize_function_base(base);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stage-wise function-selection planner for the pursuit game"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a TOML/INI config file");
  app.allow_config_extras(true);

  // run
  auto* run = app.add_subcommand("run", "Play one episode");
  std::uint64_t seed = 0;
  std::string policy = "oracle";
  bool emergency = false;
  BoardOpts board;
  std::vector<int> fixed_start;
  std::string run_out;
  run->add_option("--seed", seed, "Master random seed");
  run->add_option("--policy", policy,
                  "oracle | noisy:<eps> | kd | remote:<host>:<port>");
  run->add_flag("--emergency", emergency,
                "Activate the restricted-area emergency");
  run->add_option("--fixed-start", fixed_start,
                  "x,y pairs: pursuers then evader")
      ->delimiter(',');
  run->add_option("--out", run_out, "Write the episode trace here");
  add_board_opts(run, board);

  // tournament
  auto* tour = app.add_subcommand("tournament", "Run many episodes");
  lp::TournamentConfig tcfg;
  std::string tour_out;
  tour->add_option("--episodes", tcfg.episodes, "Number of episodes");
  tour->add_option("--seed", tcfg.seed, "Master random seed");
  tour->add_option("--policy", tcfg.policy,
                   "oracle | noisy:<eps> | kd | remote:<host>:<port>");
  tour->add_flag("--emergency", tcfg.emergency,
                 "Activate the restricted-area emergency");
  tour->add_option("--top-k", tcfg.top_k, "Retrieval candidate count");
  tour->add_option("--kd-teacher-episodes", tcfg.kd_teacher_episodes,
                   "Teacher episodes behind the kd policy");
  tour->add_option("--out", tour_out, "Report output directory");
  BoardOpts tboard;
  add_board_opts(tour, tboard);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a recorded trace");
  std::string replay_trace;
  replay->add_option("--trace", replay_trace, "Trace file")->required();

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Emit trajectory plot data");
  std::string plot_trace, plot_out = "plots";
  plot->add_option("--trace", plot_trace, "Trace file")->required();
  plot->add_option("--out", plot_out, "Output directory");

  // entropy
  auto* ent = app.add_subcommand("entropy", "Selection vs generation bounds");
  std::int64_t ek = 5, em = 100000;
  ent->add_option("--k", ek, "Selection candidate count");
  ent->add_option("--m", em, "Generation vocabulary size");

  // base
  auto* basecmd =
      app.add_subcommand("base", "Print or validate the function base");
  std::string base_out, base_validate;
  basecmd->add_option("--out", base_out, "Write the base to this file");
  basecmd->add_option("--validate", base_validate,
                      "Check an existing base file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(seed, policy, emergency, board, fixed_start, run_out);
    if (tour->parsed()) {
      tcfg.board = tboard.to_config();
      return cmd_tournament(tcfg, tour_out);
    }
    if (replay->parsed()) return cmd_replay(replay_trace);
    if (plot->parsed()) return cmd_plot_data(plot_trace, plot_out);
    if (ent->parsed()) return cmd_entropy(ek, em);
    if (basecmd->parsed()) return cmd_base(base_out, base_validate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
