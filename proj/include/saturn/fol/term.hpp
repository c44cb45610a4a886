#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "saturn/fol/symbol.hpp"

namespace saturn::fol {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable first-order term: either a variable or a function/constant
/// application. Terms are shared freely between clauses.
class Term {
 public:
  static TermPtr variable(VarId v);
  static TermPtr apply(SymbolId f, std::vector<TermPtr> args = {});

  [[nodiscard]] bool is_variable() const noexcept { return is_var_; }
  [[nodiscard]] VarId var() const noexcept { return id_; }
  [[nodiscard]] SymbolId symbol() const noexcept { return id_; }
  [[nodiscard]] std::span<const TermPtr> args() const noexcept { return args_; }
  [[nodiscard]] std::size_t hash() const noexcept { return hash_; }
  /// Number of symbol occurrences (variables included).
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool ground() const noexcept { return ground_; }

  Term(bool is_var, std::uint32_t id, std::vector<TermPtr> args);

 private:
  bool is_var_;
  bool ground_;
  std::uint32_t id_;
  std::vector<TermPtr> args_;
  std::size_t hash_;
  std::size_t size_;
};

bool equal(const Term& a, const Term& b);
inline bool equal(const TermPtr& a, const TermPtr& b) { return a == b || equal(*a, *b); }

bool occurs(VarId v, const Term& t);
void collect_vars(const Term& t, std::vector<VarId>& out);

/// Total order on terms used for canonical literal ordering.
int compare(const Term& a, const Term& b);

}  // namespace saturn::fol
