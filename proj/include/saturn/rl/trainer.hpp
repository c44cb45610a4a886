#pragma once

#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "saturn/nn/adam.hpp"
#include "saturn/policy/model.hpp"
#include "saturn/rl/experience.hpp"
#include "saturn/rl/reward.hpp"

namespace saturn::rl {

struct TrainConfig {
  std::size_t iterations = 10;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double lr = 0.001;
  double lambda = 0.004;
  double tau = 3.0;
  double tau_decay = 0.89;
  std::uint32_t tau0 = 11000;
  std::size_t buffer_window = 1;
  std::size_t zero_samples = 32;
  engine::Limits limits{200, 100.0};
  engine::EngineOptions engine;
  RewardConfig reward;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  [[nodiscard]] std::vector<std::string> validate() const;
};

struct IterationMetrics {
  std::uint32_t iteration = 0;
  double tau = 0.0;
  std::size_t attempted = 0;
  std::vector<std::string> solved;
  std::size_t cumulative_solved = 0;
  double mean_proof_steps = 0.0;
  double mean_reward = 0.0;
  double mean_entropy = 0.0;
  double mean_loss = 0.0;
  std::size_t experiences = 0;
  std::size_t updates = 0;
  std::size_t failures = 0;
};

/// Iterated rollout / update loop over a fixed problem list.
class Trainer {
 public:
  Trainer(policy::Policy& policy, TrainConfig cfg, std::vector<fol::Problem> problems);

  /// Rolls out every problem at the current temperature, stores the new
  /// experiences, runs `epochs` passes of minibatch updates over the buffer
  /// and decays the temperature.
  IterationMetrics run_iteration();

  [[nodiscard]] std::uint32_t iteration() const noexcept { return iteration_; }
  [[nodiscard]] double tau() const noexcept { return tau_; }
  [[nodiscard]] const std::set<std::string>& cumulative() const noexcept { return cumulative_; }
  [[nodiscard]] const TrainConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] ExampleBuffer& buffer() noexcept { return buffer_; }
  [[nodiscard]] nn::Adam& optimizer() noexcept { return adam_; }
  [[nodiscard]] const std::vector<engine::EpisodeTrace>& last_traces() const noexcept { return last_traces_; }
  /// Experiences added by the last iteration.
  [[nodiscard]] const std::vector<Experience>& last_experiences() const noexcept { return last_experiences_; }

  /// Loop state other than parameters, optimizer moments and the buffer.
  [[nodiscard]] nlohmann::json state_json() const;
  void restore_state(const nlohmann::json& j);

 private:
  std::vector<engine::EpisodeTrace> rollouts();
  double update();

  policy::Policy& policy_;
  TrainConfig cfg_;
  std::vector<fol::Problem> problems_;
  nn::Adam adam_;
  ExampleBuffer buffer_;
  BestTable best_;
  std::set<std::string> cumulative_;
  std::uint32_t iteration_ = 0;
  double tau_;
  std::uint64_t next_episode_ = 0;
  std::vector<engine::EpisodeTrace> last_traces_;
  std::vector<Experience> last_experiences_;
};

}  // namespace saturn::rl
