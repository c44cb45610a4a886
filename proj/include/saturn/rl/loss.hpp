#pragma once

#include <span>

#include "saturn/policy/model.hpp"
#include "saturn/rl/experience.hpp"

namespace saturn::rl {

struct LossParts {
  nn::Var loss;
  double policy_term = 0.0;
  double mean_entropy = 0.0;
};

/// -mean(r log P(a|s)) - lambda * mean(H(P(.|s))) over the batch, with P
/// recomputed under the current parameters. Clauses of one episode are
/// encoded once per call. Throws std::invalid_argument on an empty batch and
/// nn::NumericError on a non-finite loss.
LossParts compute_loss(nn::Tape& t, policy::Policy& p, std::span<const Experience* const> batch, double lambda,
                       bool training, Rng* rng);

/// Action distribution of one stored state under the current parameters, eval mode.
nn::Vector experience_distribution(policy::Policy& p, const Experience& x);

}  // namespace saturn::rl
