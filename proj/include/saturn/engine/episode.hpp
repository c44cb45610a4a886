#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "saturn/engine/engine.hpp"
#include "saturn/util/random.hpp"

namespace saturn::engine {

struct Decision {
  std::size_t index = 0;
  /// Probability assigned to each available action; may be empty for
  /// policies that do not expose one.
  std::vector<double> distribution;
};

/// Callback side of the given-clause loop: picks one of `state.actions()`.
class Guidance {
 public:
  virtual ~Guidance() = default;
  virtual void begin(const ProofState& /*state*/) {}
  virtual Decision choose(const ProofState& state) = 0;
};

/// Always takes the oldest available action.
class FifoGuidance final : public Guidance {
 public:
  Decision choose(const ProofState& state) override;
};

/// Uniformly random choice.
class RandomGuidance final : public Guidance {
 public:
  explicit RandomGuidance(std::uint64_t seed) : rng_(seed) {}
  Decision choose(const ProofState& state) override;

 private:
  Rng rng_;
};

/// Age-weight heuristic: picks the lightest clause (resolution first, then
/// age, then id), and every `age_every`-th step the oldest action instead.
class AgeWeightGuidance final : public Guidance {
 public:
  explicit AgeWeightGuidance(std::size_t age_every = 5) : age_every_(age_every) {}
  Decision choose(const ProofState& state) override;

 private:
  std::size_t age_every_;
};

struct TraceStep {
  std::uint32_t step = 0;
  std::size_t action_index = 0;
  Action action;
  std::size_t num_actions = 0;
  std::size_t num_processed = 0;
  std::vector<ClauseId> derived;
  std::vector<double> distribution;
};

struct EpisodeTrace {
  std::string problem;
  Status status = Status::Running;
  std::vector<TraceStep> steps;
  std::shared_ptr<const ProofState> final_state;
  std::optional<RefutationProof> proof;
  double seconds = 0.0;
  bool truncated = false;
  bool policy_failed = false;
  std::string failure;

  [[nodiscard]] bool solved() const noexcept { return status == Status::Refuted; }
};

/// Runs state -> policy -> execute until refuted, saturated or a limit is
/// hit. A throwing or invalid policy ends the episode with status Limit and
/// `policy_failed` set.
EpisodeTrace run_episode(const fol::Problem& p, Guidance& policy, const Limits& limits,
                         const EngineOptions& options = {});

/// Rebuilds A_t for each step of a finished episode by replaying its action
/// history. `steps` must be sorted; the result is parallel to it.
std::vector<std::vector<Action>> replay_actions(const ProofState& final_state,
                                                const std::vector<std::uint32_t>& steps);

}  // namespace saturn::engine
