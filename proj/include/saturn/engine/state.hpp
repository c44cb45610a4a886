#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "saturn/fol/clause.hpp"
#include "saturn/fol/problem.hpp"

namespace saturn::engine {

using fol::ClauseId;
using fol::ClausePtr;
using fol::InferenceRule;

struct Action {
  ClauseId clause = 0;
  InferenceRule rule = InferenceRule::BinaryResolution;

  bool operator==(const Action&) const = default;
};

enum class Status { Running, Refuted, Saturated, Limit };

std::string_view status_name(Status s);
/// Throws std::invalid_argument on unknown names.
Status parse_status(std::string_view name);

struct Limits {
  std::size_t max_steps = 2000;
  double max_seconds = 100.0;
};

struct EngineOptions {
  /// Forward subsumption of derived clauses by existing ones.
  bool subsumption = false;
  /// Derived clauses kept per step; extras are dropped by (weight, order).
  std::size_t max_derived_per_step = 500;
};

struct StepRecord {
  std::uint32_t step = 0;
  std::size_t action_index = 0;
  Action action;
  std::vector<ClauseId> derived;
  bool truncated = false;
};

/// Processed set C_t, available actions A_t and the clause store of one
/// proof attempt. Clause ids are dense: inputs first, then derived clauses
/// in creation order.
class ProofState {
 public:
  [[nodiscard]] std::uint32_t step() const noexcept { return step_; }
  [[nodiscard]] Status status() const noexcept { return status_; }
  [[nodiscard]] const std::vector<ClauseId>& processed() const noexcept { return processed_; }
  [[nodiscard]] bool is_processed(ClauseId id) const { return processed_set_.contains(id); }
  [[nodiscard]] const std::vector<Action>& actions() const noexcept { return actions_; }
  [[nodiscard]] const std::vector<ClauseId>& conjecture() const noexcept { return conjecture_; }
  [[nodiscard]] std::size_t num_inputs() const noexcept { return num_inputs_; }
  [[nodiscard]] const fol::Clause& clause(ClauseId id) const { return *clauses_.at(id); }
  [[nodiscard]] const ClausePtr& clause_ptr(ClauseId id) const { return clauses_.at(id); }
  [[nodiscard]] const std::vector<ClausePtr>& clauses() const noexcept { return clauses_; }
  [[nodiscard]] const fol::SymbolTable& symbols() const noexcept { return *symbols_; }
  [[nodiscard]] const std::shared_ptr<const fol::SymbolTable>& symbols_ptr() const noexcept { return symbols_; }
  [[nodiscard]] const std::vector<StepRecord>& history() const noexcept { return history_; }
  [[nodiscard]] std::optional<ClauseId> empty_clause() const noexcept { return empty_clause_; }
  [[nodiscard]] const EngineOptions& options() const noexcept { return options_; }
  [[nodiscard]] const std::string& problem_name() const noexcept { return problem_name_; }
  [[nodiscard]] bool truncated() const noexcept { return truncated_; }

  /// Marks the attempt as stopped by a resource limit.
  void stop_at_limit() noexcept {
    if (status_ == Status::Running) status_ = Status::Limit;
  }

 private:
  friend class StateMirror;
  friend ProofState init(const fol::Problem& p, const EngineOptions& options);
  friend std::vector<ClauseId> execute(ProofState& s, std::size_t action_index);

  ClauseId add_clause(fol::Clause c);
  [[nodiscard]] bool redundant(const fol::Clause& c) const;

  std::string problem_name_;
  std::shared_ptr<const fol::SymbolTable> symbols_;
  EngineOptions options_;
  std::uint32_t step_ = 0;
  Status status_ = Status::Running;
  std::vector<ClausePtr> clauses_;
  std::size_t num_inputs_ = 0;
  std::vector<ClauseId> processed_;
  std::unordered_set<ClauseId> processed_set_;
  std::vector<Action> actions_;
  std::vector<ClauseId> conjecture_;
  std::vector<StepRecord> history_;
  std::optional<ClauseId> empty_clause_;
  fol::FreshVars fresh_;
  std::unordered_map<std::string, std::vector<ClauseId>> variants_;
  bool truncated_ = false;
};

/// Proof state assembled from another prover's messages, so guidance code
/// written against ProofState can run on the far side of the wire protocol.
/// Clause ids are local and dense, in order of arrival.
class StateMirror {
 public:
  explicit StateMirror(std::string problem);

  [[nodiscard]] fol::SymbolTable& symbols() noexcept { return *symbols_; }
  [[nodiscard]] fol::FreshVars& fresh() noexcept { return fresh_; }

  /// Stores `c` under the next local id and returns it.
  ClauseId add_clause(fol::Clause c);
  void set_conjecture(std::vector<ClauseId> ids);
  /// Replaces step, status, processed list and actions. The processed list
  /// may only grow by appending; throws std::invalid_argument otherwise or
  /// when an id is unknown.
  void update(std::uint32_t step, Status status, std::vector<ClauseId> processed, std::vector<Action> actions);

  [[nodiscard]] const ProofState& state() const noexcept { return state_; }

 private:
  std::shared_ptr<fol::SymbolTable> symbols_;
  fol::FreshVars fresh_;
  ProofState state_;
};

}  // namespace saturn::engine
