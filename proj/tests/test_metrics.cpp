#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "lp/metrics.hpp"

using namespace lp;

TEST_CASE("max_entropy") {
  CHECK(max_entropy(1) == 0.0);
  CHECK(max_entropy(5) == doctest::Approx(std::log(5.0)));
  CHECK(max_entropy(5) < max_entropy(100000));
  CHECK_THROWS_AS(max_entropy(0), std::invalid_argument);
}

TEST_CASE("empirical_entropy examples") {
  CHECK(empirical_entropy({1.0}) == 0.0);
  CHECK(empirical_entropy({0.25, 0.25, 0.25, 0.25}) ==
        doctest::Approx(std::log(4.0)));
  CHECK(empirical_entropy({0.5, 0.25, 0.25}) == doctest::Approx(1.0397207708));
  CHECK(empirical_entropy({1.0, 0.0, 0.0}) == 0.0);  // 0 ln 0 = 0
  CHECK_THROWS_AS(empirical_entropy({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(empirical_entropy({1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("entropy is bounded by the uniform maximum") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 1 + static_cast<int>(rng() % 16);
    std::vector<double> p(n);
    double sum = 0;
    for (double& x : p) {
      x = static_cast<double>(rng() % 10000 + 1);
      sum += x;
    }
    for (double& x : p) x /= sum;
    CHECK(empirical_entropy(p) <= max_entropy(n) + 1e-9);
  }
  // equality only at uniform
  std::vector<double> uniform(7, 1.0 / 7.0);
  CHECK(std::abs(empirical_entropy(uniform) - max_entropy(7)) < 1e-9);
  std::vector<double> skew{0.5, 0.3, 0.2};
  CHECK(empirical_entropy(skew) < max_entropy(3) - 1e-3);
}

TEST_CASE("aggregation partitions episodes and averages success steps") {
  std::vector<GameOutcome> outcomes = {
      {OutcomeKind::Success, 10},
      {OutcomeKind::Success, 20},
      {OutcomeKind::FailureNoViolation, 0},
      {OutcomeKind::FailureWithViolation, 0},
  };
  MetricsReport r = aggregate_outcomes(outcomes);
  CHECK(r.successes + r.failures_no_violation + r.failures_with_violation ==
        r.episodes);
  CHECK(std::abs(r.success_rate + r.failure_no_violation_rate +
                 r.failure_with_violation_rate - 1.0) < 1e-12);
  CHECK(r.avg_steps_of_success == doctest::Approx(15.0));

  MetricsReport none = aggregate_outcomes({{OutcomeKind::FailureNoViolation,
                                            0}});
  CHECK_FALSE(none.has_avg_steps);
}

TEST_CASE("single-episode rates are 0 or 1") {
  FunctionBase base = build_default_base();
  Retriever retr(base, std::make_shared<HashingEmbedder>());
  TournamentConfig cfg;
  cfg.episodes = 1;
  cfg.seed = 3;
  MetricsReport r = run_tournament(cfg, base, retr);
  CHECK((r.success_rate == 0.0 || r.success_rate == 1.0));
}

TEST_CASE("tournaments are deterministic") {
  FunctionBase base = build_default_base();
  Retriever retr(base, std::make_shared<HashingEmbedder>());
  TournamentConfig cfg;
  cfg.episodes = 25;
  cfg.seed = 77;
  cfg.policy = "noisy:0.2";
  MetricsReport a = run_tournament(cfg, base, retr);
  MetricsReport b = run_tournament(cfg, base, retr);
  CHECK(report_json(a, cfg) == report_json(b, cfg));
  CHECK(report_table(a) == report_table(b));
}

TEST_CASE("report formats carry the headline numbers") {
  std::vector<GameOutcome> outcomes(10, {OutcomeKind::Success, 12});
  MetricsReport r = aggregate_outcomes(outcomes);
  TournamentConfig cfg;
  cfg.episodes = 10;
  std::string table = report_table(r);
  CHECK(table.find("100.00%") != std::string::npos);
  std::string js = report_json(r, cfg);
  CHECK(js.find("\"success_rate\": 1.0") != std::string::npos);
}
