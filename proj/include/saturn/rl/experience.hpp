#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "saturn/engine/episode.hpp"
#include "saturn/nn/tensor.hpp"
#include "saturn/vec/config.hpp"

namespace saturn::rl {

/// Clauses of one episode with their sparse feature columns. Experiences
/// refer to clauses by id; GNN embeddings are recomputed from the clauses
/// because they depend on parameters.
struct EpisodeRecord {
  std::uint64_t id = 0;
  std::string problem;
  std::uint32_t iteration = 0;
  std::shared_ptr<const fol::SymbolTable> symbols;
  std::vector<fol::ClausePtr> clauses;
  nn::SparseMatrix sparse;  // sparse_length x clauses
  std::vector<fol::ClauseId> conjecture;
};

struct Experience {
  std::shared_ptr<const EpisodeRecord> episode;
  std::uint32_t step = 0;
  std::vector<fol::ClauseId> processed;
  std::vector<engine::Action> actions;
  std::size_t chosen = 0;
  double reward = 0.0;
  /// Temperature the action was sampled at; the loss uses the same one.
  double tau = 1.0;
  std::vector<double> distribution;
};

struct ExperienceOptions {
  /// Cap on zero-reward steps kept per episode, sampled uniformly.
  std::size_t zero_samples = 32;
};

/// Keeps every rewarded step and a sample of the others.
std::vector<Experience> build_experiences(const engine::EpisodeTrace& trace, const std::vector<double>& rewards,
                                          const vec::VectorizerConfig& vcfg, std::uint32_t iteration,
                                          std::uint64_t episode_id, double tau, const ExperienceOptions& opt,
                                          Rng& rng);

inline constexpr int kExperienceFormat = 1;

/// JSON lines: one `episode` record (clauses as TPTP text) before the
/// `experience` records that reference it.
void write_experiences(std::ostream& out, const std::vector<Experience>& xs);
/// Re-parses clauses and recomputes sparse features. Throws
/// std::runtime_error on malformed records or unknown episode references.
std::vector<Experience> read_experiences(std::istream& in, const vec::VectorizerConfig& vcfg);

/// Experiences of the current iteration and the `window` before it.
class ExampleBuffer {
 public:
  explicit ExampleBuffer(std::size_t window) : window_(window) {}

  /// Adds a batch for `iteration` and drops iterations older than the window.
  void add(std::uint32_t iteration, std::vector<Experience> xs);
  [[nodiscard]] std::vector<const Experience*> all() const;
  [[nodiscard]] std::vector<std::uint32_t> iterations() const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] std::size_t window() const noexcept { return window_; }

 private:
  std::size_t window_;
  std::map<std::uint32_t, std::vector<Experience>> by_iteration_;
};

}  // namespace saturn::rl
