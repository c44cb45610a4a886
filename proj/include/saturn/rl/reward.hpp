#pragma once

#include <map>
#include <string>
#include <vector>

#include "saturn/engine/episode.hpp"

namespace saturn::rl {

enum class RewardSource { Time, Steps };
enum class Normalization { None, BaselineInverse, BestSoFar };

std::string_view source_name(RewardSource s);
std::string_view normalization_name(Normalization n);
/// Both throw std::invalid_argument on unknown names.
RewardSource parse_source(std::string_view name);
Normalization parse_normalization(std::string_view name);

class MissingBaseline : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RewardConfig {
  RewardSource source = RewardSource::Steps;
  Normalization normalization = Normalization::BaselineInverse;
  bool bounded = true;
  double r_min = 1.0;
  double r_max = 2.0;
  /// Cost of the reference strategy per problem name, in the unit of `source`.
  std::map<std::string, double> baseline;

  [[nodiscard]] std::vector<std::string> validate() const;
};

/// Largest raw reward seen per problem; persists for a whole run.
using BestTable = std::map<std::string, double>;

/// Steps taken or seconds spent by a finished episode.
double episode_cost(const engine::EpisodeTrace& trace, RewardSource source);

/// Normalises a raw reward (1/cost) and clamps it into [r_min, r_max] when
/// bounded. Zero stays zero. `best` is read and updated for BestSoFar.
double normalize_and_bound(double raw, const std::string& problem, const RewardConfig& cfg,
                           BestTable* best = nullptr);

/// One reward per trace step: zero unless the episode refuted and the step
/// belongs to the extracted proof.
std::vector<double> assign_rewards(const engine::EpisodeTrace& trace, const RewardConfig& cfg,
                                   BestTable* best = nullptr);

/// Runs the age-weight heuristic on every problem and records its cost.
/// Unsolved problems are charged what the heuristic spent before the limit.
std::map<std::string, double> heuristic_baseline(const std::vector<fol::Problem>& problems,
                                                 const engine::Limits& limits, RewardSource source,
                                                 const engine::EngineOptions& options = {});

}  // namespace saturn::rl
