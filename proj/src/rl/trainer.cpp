#include "saturn/rl/trainer.hpp"

#include <numeric>
#include <thread>

#include "saturn/policy/guidance.hpp"
#include "saturn/rl/loss.hpp"

namespace saturn::rl {

std::vector<std::string> TrainConfig::validate() const {
  std::vector<std::string> e;
  if (epochs == 0) e.emplace_back("epochs must be positive");
  if (batch_size == 0) e.emplace_back("batch_size must be positive");
  if (!(lr > 0.0)) e.emplace_back("lr must be positive");
  if (!(lambda >= 0.0)) e.emplace_back("lambda must be non-negative");
  if (!(tau > 0.0)) e.emplace_back("tau must be positive");
  if (!(tau_decay > 0.0 && tau_decay <= 1.0)) e.emplace_back("tau_decay must be in (0, 1]");
  if (limits.max_steps == 0) e.emplace_back("max_steps must be positive");
  if (!(limits.max_seconds > 0.0)) e.emplace_back("max_seconds must be positive");
  if (jobs == 0) e.emplace_back("jobs must be at least 1");
  for (auto& m : reward.validate()) e.push_back(std::move(m));
  return e;
}

Trainer::Trainer(policy::Policy& policy, TrainConfig cfg, std::vector<fol::Problem> problems)
    : policy_(policy),
      cfg_(std::move(cfg)),
      problems_(std::move(problems)),
      adam_(nn::AdamConfig{.lr = cfg_.lr}),
      buffer_(cfg_.buffer_window),
      tau_(cfg_.tau) {
  const auto errors = cfg_.validate();
  if (!errors.empty()) throw std::invalid_argument(errors.front());
  if (cfg_.reward.normalization == Normalization::BaselineInverse) {
    auto table = heuristic_baseline(problems_, cfg_.limits, cfg_.reward.source, cfg_.engine);
    // Entries supplied by the caller win.
    for (auto& [name, cost] : table) cfg_.reward.baseline.try_emplace(name, cost);
  }
}

std::vector<engine::EpisodeTrace> Trainer::rollouts() {
  std::vector<engine::EpisodeTrace> traces(problems_.size());
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < problems_.size(); i += cfg_.jobs) {
      policy::NeuralGuidance g(policy_, {.sample = true,
                                         .tau = tau_,
                                         .tau0 = cfg_.tau0,
                                         .seed = derive_seed(cfg_.seed, iteration_, i)});
      traces[i] = engine::run_episode(problems_[i], g, cfg_.limits, cfg_.engine);
    }
  };
  if (cfg_.jobs <= 1 || problems_.size() <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(cfg_.jobs, problems_.size()); ++k) pool.emplace_back(work, k);
  }
  return traces;
}

double Trainer::update() {
  std::vector<const Experience*> all = buffer_.all();
  if (all.empty()) return 0.0;
  Rng rng(derive_seed(cfg_.seed ^ 0x75706461746573ULL, iteration_));
  double loss_sum = 0.0;
  std::size_t batches = 0;
  for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
    for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[uniform_index(rng, i)]);
    for (std::size_t start = 0; start < all.size(); start += cfg_.batch_size) {
      const std::size_t n = std::min(cfg_.batch_size, all.size() - start);
      policy_.params.zero_grad();
      nn::Tape t;
      const LossParts parts = compute_loss(t, policy_, std::span(all).subspan(start, n), cfg_.lambda, true, &rng);
      t.backward(parts.loss);
      adam_.step(policy_.params);
      loss_sum += parts.loss.value()(0, 0);
      ++batches;
    }
  }
  return loss_sum / static_cast<double>(batches);
}

IterationMetrics Trainer::run_iteration() {
  IterationMetrics m;
  m.iteration = iteration_;
  m.tau = tau_;
  m.attempted = problems_.size();

  last_traces_ = rollouts();
  last_experiences_.clear();
  double reward_sum = 0.0;
  std::size_t reward_count = 0;
  double proof_steps = 0.0;
  double entropy_sum = 0.0;
  std::size_t entropy_count = 0;
  for (std::size_t i = 0; i < last_traces_.size(); ++i) {
    const auto& tr = last_traces_[i];
    if (tr.policy_failed) ++m.failures;
    for (const auto& st : tr.steps) {
      if (st.distribution.empty()) continue;
      std::vector<double> d = st.distribution;
      entropy_sum += policy::entropy(Eigen::Map<const nn::Vector>(d.data(), static_cast<nn::Index>(d.size())));
      ++entropy_count;
    }
    const auto rewards = assign_rewards(tr, cfg_.reward, &best_);
    if (tr.solved()) {
      m.solved.push_back(tr.problem);
      cumulative_.insert(tr.problem);
      proof_steps += static_cast<double>(tr.proof->steps.size());
      for (double r : rewards) {
        if (r > 0.0) {
          reward_sum += r;
          ++reward_count;
        }
      }
    }
    Rng rng(derive_seed(cfg_.seed ^ 0x73616d706c65ULL, iteration_, i));
    auto xs = build_experiences(tr, rewards, policy_.vec, iteration_, next_episode_++, tau_,
                                {.zero_samples = cfg_.zero_samples}, rng);
    for (auto& x : xs) last_experiences_.push_back(std::move(x));
  }
  m.cumulative_solved = cumulative_.size();
  if (!m.solved.empty()) m.mean_proof_steps = proof_steps / static_cast<double>(m.solved.size());
  if (reward_count > 0) m.mean_reward = reward_sum / static_cast<double>(reward_count);
  if (entropy_count > 0) m.mean_entropy = entropy_sum / static_cast<double>(entropy_count);
  m.experiences = last_experiences_.size();

  buffer_.add(iteration_, last_experiences_);
  const std::uint64_t before = adam_.steps();
  m.mean_loss = update();
  m.updates = adam_.steps() - before;

  tau_ *= cfg_.tau_decay;
  ++iteration_;
  return m;
}

nlohmann::json Trainer::state_json() const {
  return {{"iteration", iteration_},
          {"tau", tau_},
          {"next_episode", next_episode_},
          {"best", best_},
          {"cumulative", cumulative_},
          {"baseline", cfg_.reward.baseline}};
}

void Trainer::restore_state(const nlohmann::json& j) {
  iteration_ = j.at("iteration");
  tau_ = j.at("tau");
  next_episode_ = j.at("next_episode");
  best_ = j.at("best").get<BestTable>();
  cumulative_ = j.at("cumulative").get<std::set<std::string>>();
  cfg_.reward.baseline = j.at("baseline").get<std::map<std::string, double>>();
}

}  // namespace saturn::rl
