#pragma once

#include <unordered_map>

#include "saturn/engine/episode.hpp"
#include "saturn/policy/model.hpp"

namespace saturn::policy {

/// Rollout-time policy. Clause embeddings, projected actions and the running
/// max over processed columns are cached, so a step costs work proportional
/// to the new clauses and actions only.
class NeuralGuidance final : public engine::Guidance {
 public:
  struct Options {
    bool sample = true;
    double tau = 3.0;
    std::uint32_t tau0 = 11000;
    std::uint64_t seed = 0;
  };

  NeuralGuidance(Policy& policy, Options options);

  void begin(const engine::ProofState& state) override;
  engine::Decision choose(const engine::ProofState& state) override;

  /// Unnormalised scores for the current action list of `state`.
  Vector scores(const engine::ProofState& state);

  /// Sparse feature columns of every clause seen so far, by clause id.
  [[nodiscard]] const std::vector<Vector>& sparse_features() const noexcept { return sparse_; }

 private:
  struct ActionCache {
    Vector projected;  // W_a^T a
    double best = 0.0;
    std::size_t seen = 0;  // processed columns folded into `best`
  };

  void embed_new_clauses(const engine::ProofState& s);
  const Vector& combined(engine::ClauseId id);

  Policy& policy_;
  Options options_;
  Rng rng_;
  std::vector<Vector> sparse_;
  std::vector<Vector> embeddings_;
  std::vector<Vector> combined_;
  Vector hc_;
  Vector comb_shared_;  // W1_c h_c + b1
  std::unordered_map<std::uint64_t, ActionCache> actions_;
};

}  // namespace saturn::policy
