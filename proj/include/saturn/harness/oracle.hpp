#pragma once

#include <string>
#include <vector>

#include "saturn/fol/problem.hpp"

namespace saturn::harness {

enum class Verdict { Refuted, Saturated, Unknown };

struct OracleResult {
  Verdict verdict = Verdict::Unknown;
  /// Level at which the empty clause appeared (0 if an input is empty).
  int depth = -1;
  std::size_t clauses = 0;
};

/// Level saturation: level k holds every binary resolvent and factor with
/// a premise from level k-1 and the other from levels <= k-1, minus
/// tautologies and variants. Stops at the empty clause, at a fixpoint
/// (Saturated) or past `max_depth` / `max_clauses` (Unknown).
///
/// Written independently of the engine's inference code so it can serve as
/// a reference for it.
OracleResult bfs_refute(const fol::Problem& p, int max_depth, std::size_t max_clauses = 20000);

/// Deletion-based minimal refutable subset of the inputs under the bounded
/// oracle, as input clause names. Empty if the whole problem is not refuted.
std::vector<std::string> minimal_refutable_core(const fol::Problem& p, int max_depth,
                                                std::size_t max_clauses = 20000);

/// Brute-force model check for ground problems; throws std::invalid_argument
/// if a clause has variables or more than 20 distinct atoms occur.
bool ground_satisfiable(const fol::Problem& p);

}  // namespace saturn::harness
