#pragma once

#include <span>
#include <vector>

#include "saturn/engine/state.hpp"

namespace saturn::engine {

/// Initial state: C_0 empty, A_0 = I x inputs in rule-major order. Inputs are
/// copied with canonical literal order. Throws std::invalid_argument when the
/// problem has no negated conjecture clause.
ProofState init(const fol::Problem& p, const EngineOptions& options = {});

/// Executes `s.actions()[action_index]`:
///   C_{t+1} = C_t + {c},  A_{t+1} = (A_t - {a}) + I x derived.
/// Derived clauses get age t+1 and are filtered for tautologies, variants of
/// existing clauses and (optionally) forward subsumption. Returns the ids of
/// the clauses that were kept. Throws std::logic_error if the state is not
/// running and std::out_of_range for an unavailable action.
std::vector<ClauseId> execute(ProofState& s, std::size_t action_index);

/// Finds `a` in the action list and executes it.
std::vector<ClauseId> execute(ProofState& s, const Action& a);

/// All conclusions of rule `z` with `given` as main premise.
///
/// Binary resolution pairs `given` with each processed clause and with a
/// renamed copy of itself; factoring unifies pairs of same-sign literals.
/// Returned clauses carry parents and sos but no id or age. Tautologies and
/// variants within the result are removed.
std::vector<fol::Clause> generate_inferences(InferenceRule z, const fol::Clause& given,
                                             std::span<const ClausePtr> processed,
                                             fol::FreshVars& fresh,
                                             const fol::SymbolTable& symbols);

struct ProofStep {
  std::uint32_t step = 0;
  Action action;
  /// Derived clauses of this step that are ancestors of the empty clause.
  std::vector<ClauseId> derived;
};

struct RefutationProof {
  std::vector<ProofStep> steps;
  /// Ancestor closure of the empty clause under parents, sorted.
  std::vector<ClauseId> closure;
  ClauseId empty_clause = 0;
  std::uint32_t total_steps = 0;
  double seconds = 0.0;

  [[nodiscard]] bool contains_step(std::uint32_t t) const;
};

/// Throws std::logic_error unless the state is refuted.
RefutationProof extract_proof(const ProofState& s);

}  // namespace saturn::engine
