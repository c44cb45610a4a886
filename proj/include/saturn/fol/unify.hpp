#pragma once

#include <map>
#include <optional>

#include "saturn/fol/clause.hpp"

namespace saturn::fol {

/// Mapping from variables to terms. Application is simultaneous: the image
/// of a variable is not itself rewritten.
class Substitution {
 public:
  Substitution() = default;

  void bind(VarId v, TermPtr t) { map_[v] = std::move(t); }
  [[nodiscard]] const TermPtr* lookup(VarId v) const;
  [[nodiscard]] bool empty() const noexcept { return map_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }
  [[nodiscard]] const std::map<VarId, TermPtr>& bindings() const noexcept { return map_; }

  [[nodiscard]] TermPtr apply(const TermPtr& t) const;
  [[nodiscard]] Literal apply(const Literal& l) const;
  /// Applies to every literal and deduplicates. The result keeps metadata
  /// of `c` but takes `new_id`.
  [[nodiscard]] Clause apply(const Clause& c, ClauseId new_id) const;

  /// True if applying twice equals applying once on every bound variable.
  [[nodiscard]] bool idempotent() const;

 private:
  std::map<VarId, TermPtr> map_;
};

enum class UnifyFailure { Clash, OccursCheck };

struct UnifyResult {
  std::optional<Substitution> mgu;
  UnifyFailure failure = UnifyFailure::Clash;

  explicit operator bool() const noexcept { return mgu.has_value(); }
};

/// Most general unifier with occurs check. The result is idempotent.
UnifyResult unify(const TermPtr& a, const TermPtr& b);

/// Unifies the atoms of two literals, ignoring polarity.
UnifyResult unify_atoms(const Literal& a, const Literal& b);

/// One-way matching: finds sigma with sigma(pattern) == target, extending
/// `sigma`. Variables of `target` are treated as constants.
bool match(const TermPtr& pattern, const TermPtr& target, Substitution& sigma);

inline Clause apply_substitution(const Substitution& s, const Clause& c, ClauseId new_id) {
  return s.apply(c, new_id);
}

/// True if `a` and `b` are equal up to a bijective variable renaming, with
/// literals matched as sets.
bool is_variant(const Clause& a, const Clause& b);

/// True if some sigma maps every literal of `general` into `specific`.
bool subsumes(const Clause& general, const Clause& specific);

}  // namespace saturn::fol
