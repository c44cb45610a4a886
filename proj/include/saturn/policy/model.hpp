#pragma once

#include <span>
#include <vector>

#include "saturn/fol/clause.hpp"
#include "saturn/nn/ops.hpp"
#include "saturn/vec/config.hpp"

namespace saturn::policy {

using nn::Index;
using nn::Matrix;
using nn::ParamStore;
using nn::Tape;
using nn::Var;
using nn::Vector;

struct PolicyConfig {
  /// Clause embeddings have size 2d.
  std::size_t d = 64;
  /// Fully connected layers of the clause encoder.
  std::size_t layers = 2;
  /// Applied to encoder outputs during gradient updates only.
  double dropout = 0.57;

  [[nodiscard]] Index width() const { return static_cast<Index>(2 * d); }
  [[nodiscard]] std::vector<std::string> validate() const;
};

/// Everything needed to score actions: configs plus the parameter store
/// shared by the vectorizer (GNN weights) and the policy.
struct Policy {
  vec::VectorizerConfig vec;
  PolicyConfig cfg;
  ParamStore params;
};

/// Builds a policy with freshly initialised parameters.
Policy make_policy(const vec::VectorizerConfig& vcfg, const PolicyConfig& pcfg, std::uint64_t seed);

/// Parameter names that must exist for `p`'s configuration.
std::vector<std::string> expected_parameters(const vec::VectorizerConfig& vcfg, const PolicyConfig& pcfg);

// Tape functions. Embeddings are columns.

/// k fully connected layers from clause features to size 2d (ReLU between
/// layers, linear output), then dropout when `training`.
Var encode(Tape& t, Policy& p, const Var& features, bool training, Rng* rng);

/// Same encoder with the input split into hashed sparse columns and, when a
/// GNN is configured, its d x n output (`gnn` may be null otherwise). Equal
/// to `encode` on the stacked dense input.
Var encode_split(Tape& t, Policy& p, const nn::SparseMatrix& sparse, const Var* gnn, bool training, Rng* rng);

/// Mean of the conjecture clause embeddings; throws on an empty set.
Var embed_conjecture(const Var& conj_embeddings);

/// h + h_c + F(h || h_c) for every column of `h`.
Var combine_processed(Tape& t, Policy& p, const Var& h, const Var& hc);

/// Clause embedding followed by the one-hot rule block, one column per action.
Var embed_actions(Tape& t, const Var& clause_embeddings, std::span<const fol::InferenceRule> rules);

/// Row max of A^T W_a C: one unnormalised score per action.
Var score_actions(Tape& t, Policy& p, const Var& actions, const Var& processed);

/// Index layout of one proof state over a block of clause columns.
struct StateIndex {
  std::vector<Index> processed;
  std::vector<Index> conjecture;
  std::vector<Index> action_clauses;
  std::vector<fol::InferenceRule> action_rules;
};

/// Scores for a state whose clauses have been encoded into `embeddings`.
/// An empty processed set uses the conjecture embedding as the only column.
Var state_scores(Tape& t, Policy& p, const Var& embeddings, const StateIndex& s);

// Selection.

struct Selection {
  std::size_t index = 0;
  Vector distribution;
};

/// softmax(scores / tau). Samples when `sample` and step < tau0, otherwise
/// takes the first argmax. Throws std::invalid_argument on empty scores.
Selection select_action(const Vector& scores, std::uint32_t step, double tau, std::uint32_t tau0, Rng& rng,
                        bool sample);

/// -sum p log p.
double entropy(const Vector& distribution);

}  // namespace saturn::policy
