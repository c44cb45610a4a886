#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "saturn/fol/term.hpp"

namespace saturn::fol {

using ClauseId = std::uint32_t;

/// Inference rules available to the saturation loop. The numeric value is
/// the one-hot position used by the policy.
enum class InferenceRule : std::uint8_t { BinaryResolution = 0, Factoring = 1 };

inline constexpr std::size_t kNumRules = 2;
inline constexpr InferenceRule kRules[kNumRules] = {InferenceRule::BinaryResolution,
                                                    InferenceRule::Factoring};

std::string_view rule_name(InferenceRule r);
/// Throws std::invalid_argument on unknown names.
InferenceRule parse_rule(std::string_view name);

enum class Role : std::uint8_t { Axiom, NegatedConjecture, Derived };

std::string_view role_name(Role r);

struct Literal {
  bool positive = true;
  SymbolId predicate = 0;
  std::vector<TermPtr> args;

  [[nodiscard]] bool ground() const;
};

bool equal(const Literal& a, const Literal& b);
/// Same predicate and arguments, opposite polarity.
bool complementary(const Literal& a, const Literal& b);

struct Parent {
  ClauseId clause = 0;
  InferenceRule rule = InferenceRule::BinaryResolution;

  bool operator==(const Parent&) const = default;
};

struct Clause {
  ClauseId id = 0;
  std::vector<Literal> literals;
  std::uint32_t age = 0;
  Role role = Role::Axiom;
  std::vector<Parent> parents;
  bool sos = false;
  /// Name from the input file; empty for derived clauses.
  std::string name;

  [[nodiscard]] bool empty() const noexcept { return literals.empty(); }
  [[nodiscard]] bool ground() const;
};

using ClausePtr = std::shared_ptr<const Clause>;

/// Structural equality of literal lists (order-sensitive, variable ids compared).
bool same_literals(const Clause& a, const Clause& b);

std::vector<VarId> clause_vars(const Clause& c);

/// Count of predicate, function, constant and variable occurrences.
std::size_t clause_weight(const Clause& c);

/// True if the clause contains a complementary pair of literals.
bool is_tautology(const Clause& c);

/// Removes structurally identical literals, keeping the first occurrence.
void dedupe_literals(std::vector<Literal>& lits);

/// Source of fresh variable ids, confined to one proof attempt.
class FreshVars {
 public:
  explicit FreshVars(VarId start = 0) : next_(start) {}
  VarId take() noexcept { return next_++; }
  [[nodiscard]] VarId peek() const noexcept { return next_; }
  void ensure_above(VarId v) noexcept {
    if (v >= next_) next_ = v + 1;
  }

 private:
  VarId next_;
};

/// Copy of `c` whose variables are replaced, in order of first occurrence,
/// by fresh ids. Ground clauses come back with identical literals.
Clause rename_apart(const Clause& c, FreshVars& fresh);

}  // namespace saturn::fol
