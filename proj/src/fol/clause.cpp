#include "saturn/fol/clause.hpp"

#include <stdexcept>
#include <unordered_map>

#include "saturn/fol/unify.hpp"

namespace saturn::fol {

std::string_view rule_name(InferenceRule r) {
  switch (r) {
    case InferenceRule::BinaryResolution: return "binary_resolution";
    case InferenceRule::Factoring: return "factoring";
  }
  return "?";
}

InferenceRule parse_rule(std::string_view name) {
  if (name == "binary_resolution") return InferenceRule::BinaryResolution;
  if (name == "factoring") return InferenceRule::Factoring;
  throw std::invalid_argument("unknown inference rule '" + std::string(name) + "'");
}

std::string_view role_name(Role r) {
  switch (r) {
    case Role::Axiom: return "axiom";
    case Role::NegatedConjecture: return "negated_conjecture";
    case Role::Derived: return "plain";
  }
  return "?";
}

bool Literal::ground() const {
  for (const auto& a : args) {
    if (!a->ground()) return false;
  }
  return true;
}

namespace {

bool same_atom(const Literal& a, const Literal& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

}  // namespace

bool equal(const Literal& a, const Literal& b) { return a.positive == b.positive && same_atom(a, b); }

bool complementary(const Literal& a, const Literal& b) {
  return a.positive != b.positive && same_atom(a, b);
}

bool Clause::ground() const {
  for (const auto& l : literals) {
    if (!l.ground()) return false;
  }
  return true;
}

bool same_literals(const Clause& a, const Clause& b) {
  if (a.literals.size() != b.literals.size()) return false;
  for (std::size_t i = 0; i < a.literals.size(); ++i) {
    if (!equal(a.literals[i], b.literals[i])) return false;
  }
  return true;
}

std::vector<VarId> clause_vars(const Clause& c) {
  std::vector<VarId> out;
  for (const auto& l : c.literals) {
    for (const auto& a : l.args) collect_vars(*a, out);
  }
  return out;
}

std::size_t clause_weight(const Clause& c) {
  std::size_t w = 0;
  for (const auto& l : c.literals) {
    w += 1;
    for (const auto& a : l.args) w += a->size();
  }
  return w;
}

bool is_tautology(const Clause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
      if (complementary(c.literals[i], c.literals[j])) return true;
    }
  }
  return false;
}

void dedupe_literals(std::vector<Literal>& lits) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (auto& l : lits) {
    bool seen = false;
    for (const auto& o : out) {
      if (equal(o, l)) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(std::move(l));
  }
  lits = std::move(out);
}

Clause rename_apart(const Clause& c, FreshVars& fresh) {
  Substitution s;
  for (VarId v : clause_vars(c)) s.bind(v, Term::variable(fresh.take()));
  Clause out = c;
  for (auto& l : out.literals) l = s.apply(l);
  return out;
}

}  // namespace saturn::fol
