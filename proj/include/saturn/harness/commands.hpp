#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "saturn/harness/config.hpp"
#include "saturn/harness/corpus.hpp"
#include "saturn/harness/metrics.hpp"
#include "saturn/harness/protocol.hpp"
#include "saturn/nn/checkpoint.hpp"

namespace saturn::harness {

// Shared helpers.

using GuidanceFactory = std::function<std::unique_ptr<engine::Guidance>(std::size_t problem_index)>;

/// One episode per problem, spread over `jobs` workers; results keep the
/// problem order and do not depend on `jobs`.
std::vector<engine::EpisodeTrace> run_problems(const std::vector<fol::Problem>& problems,
                                               const GuidanceFactory& make, const engine::Limits& limits,
                                               const engine::EngineOptions& options, std::size_t jobs);

/// Checkpoint holding parameters, optimizer, configuration and loop state.
nn::Checkpoint training_checkpoint(const policy::Policy& p, rl::Trainer& trainer, const RunConfig& cfg);

/// Rebuilds a policy from a checkpoint written by `train`; throws
/// nn::CheckpointError if parameters are missing or misshapen.
policy::Policy load_policy(const std::filesystem::path& path, RunConfig* cfg = nullptr);

/// Path of the checkpoint for iteration `k` (1-based) inside a run directory.
std::filesystem::path checkpoint_path(const std::filesystem::path& run_dir, std::size_t k);

struct GradCheckItem {
  std::string name;
  double error = 0.0;
};
/// Finite-difference checks of every differentiable operation, the GNN
/// layers, the policy and the full loss. Inputs are placed away from kinks.
std::vector<GradCheckItem> grad_check_suite(std::uint64_t seed);

// Commands. Each returns the process exit code.

struct ProveOptions {
  std::filesystem::path problem;
  /// fifo, random, heuristic or a checkpoint path.
  std::string policy = "heuristic";
  engine::Limits limits{2000, 100.0};
  engine::EngineOptions engine;
  std::uint64_t seed = 0;
};
/// 0 refuted, 1 saturated or limit, 2 error.
int cmd_prove(const ProveOptions& o, std::ostream& out, std::ostream& err);

struct TrainOptions {
  std::filesystem::path corpus;
  RunConfig config;
  std::filesystem::path output;
};
/// Writes config.json, metrics.csv and checkpoints/iter_NNNN.json into the
/// output directory, resuming after the last checkpoint found there.
int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::filesystem::path corpus;
  std::filesystem::path checkpoint;
  /// Problems also listed by this corpus are skipped.
  std::optional<std::filesystem::path> train_corpus;
  engine::Limits limits{200, 100.0};
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  /// CSV file; empty writes the table to `out`.
  std::filesystem::path output;
};
int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err);
/// Greedy evaluation without the CSV, for programmatic use.
EvalSummary evaluate(policy::Policy& p, const std::vector<fol::Problem>& problems, const std::string& corpus,
                     const engine::Limits& limits, const engine::EngineOptions& engine, std::uint64_t seed,
                     std::size_t jobs);

struct GenCorpusOptions {
  Family family = Family::MarkerPredicate;
  std::size_t size = 100;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  std::string name;
};
int cmd_gen_corpus(const GenCorpusOptions& o, std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::filesystem::path checkpoint;
  bool stdio = false;
  std::string host = "127.0.0.1";
  std::uint16_t port = 7341;
  ServerOptions server;
};
/// Runs until stdin closes (stdio) or forever (TCP).
int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err);

int cmd_grad_check(std::uint64_t seed, double tolerance, std::ostream& out);

}  // namespace saturn::harness
