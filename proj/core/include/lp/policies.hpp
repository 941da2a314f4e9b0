#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lp/function_base.hpp"
#include "lp/retriever.hpp"

namespace lp {

// Raised when a policy cannot produce a usable choice; the planner records a
// selection fault and the pursuers stand still for the step.
struct SelectionFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SelectorPolicy {
 public:
  virtual ~SelectorPolicy() = default;
  virtual std::string name() const = 0;
  virtual void reseed(std::uint64_t /*seed*/) {}
  // Returns the name of one candidate; candidates are aligned with the
  // RankedCandidates the planner recorded.
  virtual std::string select(const RetrievalQuery& q,
                             const std::vector<const FunctionSpec*>& candidates,
                             const TaskContext& ctx) = 0;
};

// Picks the unique candidate whose stage_tag matches the current stage.
class OraclePolicy : public SelectorPolicy {
 public:
  std::string name() const override { return "oracle"; }
  std::string select(const RetrievalQuery& q,
                     const std::vector<const FunctionSpec*>& candidates,
                     const TaskContext& ctx) override;
};

// Oracle with probability 1-epsilon, otherwise uniform over the rest.
class NoisyPolicy : public SelectorPolicy {
 public:
  explicit NoisyPolicy(double epsilon, std::uint64_t seed = 0);
  std::string name() const override;
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  std::string select(const RetrievalQuery& q,
                     const std::vector<const FunctionSpec*>& candidates,
                     const TaskContext& ctx) override;
  double epsilon() const { return epsilon_; }

 private:
  OraclePolicy oracle_;
  double epsilon_;
  std::mt19937_64 rng_;
};

// Asks an external selector service (see docs/wire_formats.md) for a
// candidate name; one retry, then the reply is treated as a selection fault.
class RemoteSelectorPolicy : public SelectorPolicy {
 public:
  RemoteSelectorPolicy(std::string host, int port, int timeout_seconds = 5);
  std::string name() const override;
  std::string select(const RetrievalQuery& q,
                     const std::vector<const FunctionSpec*>& candidates,
                     const TaskContext& ctx) override;

 private:
  std::string host_;
  int port_;
  int timeout_seconds_;
};

// ---- KD baseline ------------------------------------------------------------

// Memorized (state -> moves) pairs harvested from teacher episodes.
class MemorizedCorpus {
 public:
  struct Record {
    std::string key;
    GameState state;
    std::vector<GridPoint> moves;
  };

  static std::string state_key(const GameState& state);

  void add(const GameState& state, std::vector<GridPoint> moves);
  void finalize();  // sort by key, drop duplicate keys
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Exact key match, else nearest neighbor by summed per-agent Manhattan
  // distance, ties broken lexicographically by key. Throws on empty corpus.
  const Record& lookup(const GameState& state) const;

 private:
  std::vector<Record> records_;
};

// Proposes pursuer moves directly, bypassing the function pipeline: replays
// the remembered teacher action of the nearest memorized state. On an exact
// hit this reproduces the teacher's moves; off-distribution the remembered
// displacement is applied blindly to the current positions and may be
// illegal (off-board, or into a restricted area the teacher never saw).
class KdMimicPolicy {
 public:
  explicit KdMimicPolicy(MemorizedCorpus corpus, std::string spec = "kd")
      : corpus_(std::move(corpus)), spec_(std::move(spec)) {}
  std::string name() const { return spec_; }
  std::vector<GridPoint> propose(const GameState& state) const;
  const MemorizedCorpus& corpus() const { return corpus_; }

 private:
  MemorizedCorpus corpus_;
  std::string spec_;
};

}  // namespace lp
