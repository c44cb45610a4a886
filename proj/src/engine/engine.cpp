#include "saturn/engine/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "saturn/fol/canonical.hpp"
#include "saturn/fol/unify.hpp"

namespace saturn::engine {

using fol::Clause;
using fol::Literal;

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Running: return "running";
    case Status::Refuted: return "refuted";
    case Status::Saturated: return "saturated";
    case Status::Limit: return "limit";
  }
  return "?";
}

Status parse_status(std::string_view name) {
  for (auto s : {Status::Running, Status::Refuted, Status::Saturated, Status::Limit})
    if (status_name(s) == name) return s;
  throw std::invalid_argument("unknown status '" + std::string(name) + "'");
}

bool ProofState::redundant(const Clause& c) const {
  const auto key = fol::variant_key(c, *symbols_);
  if (auto it = variants_.find(key); it != variants_.end()) {
    for (ClauseId id : it->second) {
      if (fol::is_variant(*clauses_[id], c)) return true;
    }
  }
  if (options_.subsumption) {
    for (const auto& other : clauses_) {
      if (fol::subsumes(*other, c)) return true;
    }
  }
  return false;
}

ClauseId ProofState::add_clause(Clause c) {
  const auto id = static_cast<ClauseId>(clauses_.size());
  c.id = id;
  variants_[fol::variant_key(c, *symbols_)].push_back(id);
  if (c.empty() && !empty_clause_) empty_clause_ = id;
  clauses_.push_back(std::make_shared<const Clause>(std::move(c)));
  return id;
}

ProofState init(const fol::Problem& p, const EngineOptions& options) {
  if (p.negated_conjecture.empty()) throw std::invalid_argument("problem has no negated conjecture clause");
  ProofState s;
  s.problem_name_ = p.name;
  s.symbols_ = p.symbols;
  s.options_ = options;
  s.fresh_ = fol::FreshVars(p.next_var);

  for (const Clause* in : p.inputs()) {
    Clause c = *in;
    fol::dedupe_literals(c.literals);
    fol::canonicalize(c, *s.symbols_);
    for (auto v : fol::clause_vars(c)) s.fresh_.ensure_above(v);
    c.age = 0;
    c.parents.clear();
    c.sos = c.role == fol::Role::NegatedConjecture;
    const ClauseId id = s.add_clause(std::move(c));
    if (s.clauses_[id]->role == fol::Role::NegatedConjecture) s.conjecture_.push_back(id);
  }
  s.num_inputs_ = s.clauses_.size();
  for (InferenceRule r : fol::kRules) {
    for (ClauseId id = 0; id < s.num_inputs_; ++id) s.actions_.push_back(Action{id, r});
  }
  if (s.empty_clause_) s.status_ = Status::Refuted;
  return s;
}

namespace {

std::vector<Literal> without(const std::vector<Literal>& lits, std::size_t skip, const fol::Substitution& s) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i != skip) out.push_back(s.apply(lits[i]));
  }
  return out;
}

void resolve_pair(const Clause& g, const Clause& p, std::vector<fol::Parent> parents, bool sos,
                  std::vector<Clause>& out) {
  for (std::size_t i = 0; i < g.literals.size(); ++i) {
    const Literal& li = g.literals[i];
    for (std::size_t j = 0; j < p.literals.size(); ++j) {
      const Literal& lj = p.literals[j];
      if (li.positive == lj.positive || li.predicate != lj.predicate) continue;
      auto u = fol::unify_atoms(li, lj);
      if (!u) continue;
      Clause r;
      r.role = fol::Role::Derived;
      r.literals = without(g.literals, i, *u.mgu);
      auto rest = without(p.literals, j, *u.mgu);
      r.literals.insert(r.literals.end(), std::make_move_iterator(rest.begin()),
                        std::make_move_iterator(rest.end()));
      fol::dedupe_literals(r.literals);
      r.parents = parents;
      r.sos = sos;
      out.push_back(std::move(r));
    }
  }
}

}  // namespace

std::vector<Clause> generate_inferences(InferenceRule z, const Clause& given,
                                        std::span<const ClausePtr> processed, fol::FreshVars& fresh,
                                        const fol::SymbolTable& symbols) {
  std::vector<Clause> raw;
  if (z == InferenceRule::BinaryResolution) {
    const Clause g = fol::rename_apart(given, fresh);
    for (const auto& partner : processed) {
      if (partner->id == given.id) continue;
      const Clause p = fol::rename_apart(*partner, fresh);
      resolve_pair(g, p, {{given.id, z}, {partner->id, z}}, given.sos || partner->sos, raw);
    }
    const Clause self = fol::rename_apart(given, fresh);
    resolve_pair(g, self, {{given.id, z}}, given.sos, raw);
  } else {
    for (std::size_t i = 0; i < given.literals.size(); ++i) {
      for (std::size_t j = i + 1; j < given.literals.size(); ++j) {
        const Literal& a = given.literals[i];
        const Literal& b = given.literals[j];
        if (a.positive != b.positive || a.predicate != b.predicate) continue;
        auto u = fol::unify_atoms(a, b);
        if (!u) continue;
        Clause f = u.mgu->apply(given, 0);
        f.role = fol::Role::Derived;
        f.parents = {{given.id, z}};
        f.sos = given.sos;
        f.name.clear();
        raw.push_back(std::move(f));
      }
    }
  }

  std::vector<Clause> out;
  for (auto& c : raw) {
    if (fol::is_tautology(c)) continue;
    fol::canonicalize(c, symbols);
    bool dup = false;
    for (const auto& o : out) {
      if (fol::is_variant(o, c)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

std::vector<ClauseId> execute(ProofState& s, std::size_t action_index) {
  if (s.status_ != Status::Running) throw std::logic_error("proof state is not running");
  if (action_index >= s.actions_.size()) throw std::out_of_range("action not available");
  const Action a = s.actions_[action_index];
  const ClausePtr given = s.clauses_.at(a.clause);

  std::vector<ClausePtr> partners;
  partners.reserve(s.processed_.size());
  for (ClauseId id : s.processed_) partners.push_back(s.clauses_[id]);
  auto candidates = generate_inferences(a.rule, *given, partners, s.fresh_, *s.symbols_);

  std::vector<Clause> kept;
  for (auto& c : candidates) {
    if (!s.redundant(c)) kept.push_back(std::move(c));
  }
  bool truncated = false;
  if (kept.size() > s.options_.max_derived_per_step) {
    std::vector<std::size_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return fol::clause_weight(kept[x]) < fol::clause_weight(kept[y]);
    });
    order.resize(s.options_.max_derived_per_step);
    std::sort(order.begin(), order.end());
    std::vector<Clause> trimmed;
    for (std::size_t i : order) trimmed.push_back(std::move(kept[i]));
    kept = std::move(trimmed);
    truncated = true;
    s.truncated_ = true;
  }

  std::vector<ClauseId> derived;
  derived.reserve(kept.size());
  for (auto& c : kept) {
    c.age = s.step_ + 1;
    derived.push_back(s.add_clause(std::move(c)));
  }

  if (s.processed_set_.insert(a.clause).second) s.processed_.push_back(a.clause);
  s.actions_.erase(s.actions_.begin() + static_cast<std::ptrdiff_t>(action_index));
  for (InferenceRule r : fol::kRules) {
    for (ClauseId id : derived) s.actions_.push_back(Action{id, r});
  }

  s.history_.push_back(StepRecord{s.step_, action_index, a, derived, truncated});
  ++s.step_;
  if (s.empty_clause_) {
    s.status_ = Status::Refuted;
  } else if (s.actions_.empty()) {
    s.status_ = Status::Saturated;
  }
  return derived;
}

std::vector<ClauseId> execute(ProofState& s, const Action& a) {
  const auto& acts = s.actions();
  auto it = std::find(acts.begin(), acts.end(), a);
  if (it == acts.end()) throw std::out_of_range("action not available");
  return execute(s, static_cast<std::size_t>(it - acts.begin()));
}

bool RefutationProof::contains_step(std::uint32_t t) const {
  return std::any_of(steps.begin(), steps.end(), [t](const ProofStep& p) { return p.step == t; });
}

RefutationProof extract_proof(const ProofState& s) {
  if (s.status() != Status::Refuted || !s.empty_clause()) throw std::logic_error("proof state is not refuted");
  RefutationProof proof;
  proof.empty_clause = *s.empty_clause();
  proof.total_steps = s.step();

  std::vector<bool> in(s.clauses().size(), false);
  std::vector<ClauseId> stack{proof.empty_clause};
  in[proof.empty_clause] = true;
  while (!stack.empty()) {
    const ClauseId id = stack.back();
    stack.pop_back();
    for (const auto& par : s.clause(id).parents) {
      if (!in[par.clause]) {
        in[par.clause] = true;
        stack.push_back(par.clause);
      }
    }
  }
  for (ClauseId id = 0; id < in.size(); ++id) {
    if (in[id]) proof.closure.push_back(id);
  }
  for (const auto& rec : s.history()) {
    ProofStep ps{rec.step, rec.action, {}};
    for (ClauseId d : rec.derived) {
      if (in[d]) ps.derived.push_back(d);
    }
    if (!ps.derived.empty()) proof.steps.push_back(std::move(ps));
  }
  return proof;
}

}  // namespace saturn::engine
