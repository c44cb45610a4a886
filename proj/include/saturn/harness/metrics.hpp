#pragma once

#include <string>
#include <vector>

#include "saturn/rl/trainer.hpp"

namespace saturn::harness {

/// Columns of the training CSV, one row per iteration (numbered from 1).
///   iteration, tau, attempted, solved, completion_ratio, cumulative_solved,
///   best_solved, mean_proof_steps, mean_reward, mean_entropy, mean_loss,
///   experiences, updates, failures, solved_problems
/// `solved_problems` joins names with ';'.
const std::vector<std::string>& train_columns();
std::string train_header();
/// `best_solved` is the largest per-iteration solved count up to this row.
std::string train_row(const rl::IterationMetrics& m, std::size_t best_solved);

/// Columns of the evaluation CSV, one row per evaluated corpus.
///   corpus, problems, solved, completion_ratio, mean_proof_steps, failures,
///   solved_problems
const std::vector<std::string>& eval_columns();
std::string eval_header();

struct EvalSummary {
  std::string corpus;
  std::size_t problems = 0;
  std::vector<std::string> solved;
  double mean_proof_steps = 0.0;
  std::size_t failures = 0;
};
std::string eval_row(const EvalSummary& s);

/// Splits one CSV row written by this module (no quoting is needed since
/// fields never contain commas).
std::vector<std::string> split_row(const std::string& line);

}  // namespace saturn::harness
