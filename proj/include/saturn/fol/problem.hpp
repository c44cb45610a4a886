#pragma once

#include <memory>
#include <string>
#include <vector>

#include "saturn/fol/clause.hpp"
#include "saturn/fol/symbol.hpp"

namespace saturn::fol {

struct Problem {
  std::string name;
  std::shared_ptr<const SymbolTable> symbols;
  std::vector<Clause> axioms;
  std::vector<Clause> negated_conjecture;
  /// One past the largest variable id used by any input clause.
  VarId next_var = 0;

  [[nodiscard]] std::size_t size() const noexcept {
    return axioms.size() + negated_conjecture.size();
  }
  /// Inputs in file order (by id).
  [[nodiscard]] std::vector<const Clause*> inputs() const;
};

}  // namespace saturn::fol
