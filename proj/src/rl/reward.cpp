#include "saturn/rl/reward.hpp"

#include <algorithm>
#include <cmath>

namespace saturn::rl {

std::string_view source_name(RewardSource s) { return s == RewardSource::Time ? "time" : "steps"; }

std::string_view normalization_name(Normalization n) {
  switch (n) {
    case Normalization::None: return "none";
    case Normalization::BaselineInverse: return "baseline_inverse";
    case Normalization::BestSoFar: return "best_so_far";
  }
  return "?";
}

RewardSource parse_source(std::string_view name) {
  if (name == "time") return RewardSource::Time;
  if (name == "steps") return RewardSource::Steps;
  throw std::invalid_argument("unknown reward source '" + std::string(name) + "'");
}

Normalization parse_normalization(std::string_view name) {
  for (auto n : {Normalization::None, Normalization::BaselineInverse, Normalization::BestSoFar})
    if (normalization_name(n) == name) return n;
  throw std::invalid_argument("unknown reward normalization '" + std::string(name) + "'");
}

std::vector<std::string> RewardConfig::validate() const {
  std::vector<std::string> errors;
  if (bounded && !(r_min <= r_max)) errors.emplace_back("reward.min must not exceed reward.max");
  if (bounded && !(r_min >= 0.0)) errors.emplace_back("reward.min must be non-negative");
  for (const auto& [name, cost] : baseline)
    if (!(cost > 0.0)) errors.push_back("baseline cost for '" + name + "' must be positive");
  return errors;
}

double episode_cost(const engine::EpisodeTrace& trace, RewardSource source) {
  if (source == RewardSource::Steps) return static_cast<double>(trace.steps.size());
  // Guard against clock granularity on trivial problems.
  return std::max(trace.seconds, 1e-6);
}

double normalize_and_bound(double raw, const std::string& problem, const RewardConfig& cfg, BestTable* best) {
  if (raw == 0.0) return 0.0;
  double r = raw;
  switch (cfg.normalization) {
    case Normalization::None: break;
    case Normalization::BaselineInverse: {
      auto it = cfg.baseline.find(problem);
      if (it == cfg.baseline.end()) throw MissingBaseline("no baseline cost for problem '" + problem + "'");
      r = raw * it->second;
      break;
    }
    case Normalization::BestSoFar: {
      if (best == nullptr) throw std::invalid_argument("best_so_far normalization needs a table");
      double& b = (*best)[problem];
      b = std::max(b, raw);
      r = raw / b;
      break;
    }
  }
  if (cfg.bounded) r = std::clamp(r, cfg.r_min, cfg.r_max);
  return r;
}

std::vector<double> assign_rewards(const engine::EpisodeTrace& trace, const RewardConfig& cfg, BestTable* best) {
  std::vector<double> rewards(trace.steps.size(), 0.0);
  if (!trace.solved() || !trace.proof) return rewards;
  const double raw = 1.0 / episode_cost(trace, cfg.source);
  const double r = normalize_and_bound(raw, trace.problem, cfg, best);
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    if (trace.proof->contains_step(trace.steps[i].step)) rewards[i] = r;
  return rewards;
}

std::map<std::string, double> heuristic_baseline(const std::vector<fol::Problem>& problems,
                                                 const engine::Limits& limits, RewardSource source,
                                                 const engine::EngineOptions& options) {
  std::map<std::string, double> table;
  for (const auto& p : problems) {
    engine::AgeWeightGuidance g;
    const auto trace = engine::run_episode(p, g, limits, options);
    table[p.name] = std::max(episode_cost(trace, source), source == RewardSource::Steps ? 1.0 : 1e-6);
  }
  return table;
}

}  // namespace saturn::rl
