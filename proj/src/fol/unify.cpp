#include "saturn/fol/unify.hpp"

#include <unordered_map>
#include <utility>

namespace saturn::fol {

const TermPtr* Substitution::lookup(VarId v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

TermPtr Substitution::apply(const TermPtr& t) const {
  if (t->is_variable()) {
    const TermPtr* img = lookup(t->var());
    return img ? *img : t;
  }
  if (t->ground() || map_.empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  bool changed = false;
  for (const auto& a : t->args()) {
    args.push_back(apply(a));
    changed = changed || args.back() != a;
  }
  return changed ? Term::apply(t->symbol(), std::move(args)) : t;
}

Literal Substitution::apply(const Literal& l) const {
  Literal out{l.positive, l.predicate, {}};
  out.args.reserve(l.args.size());
  for (const auto& a : l.args) out.args.push_back(apply(a));
  return out;
}

Clause Substitution::apply(const Clause& c, ClauseId new_id) const {
  Clause out = c;
  out.id = new_id;
  for (auto& l : out.literals) l = apply(l);
  dedupe_literals(out.literals);
  return out;
}

bool Substitution::idempotent() const {
  for (const auto& [v, t] : map_) {
    if (!equal(apply(t), t)) return false;
  }
  return true;
}

namespace {

class Bindings {
 public:
  const TermPtr& deref(const TermPtr& t) const {
    const TermPtr* cur = &t;
    while ((*cur)->is_variable()) {
      auto it = map_.find((*cur)->var());
      if (it == map_.end()) break;
      cur = &it->second;
    }
    return *cur;
  }

  bool occurs(VarId v, const TermPtr& t) const {
    const TermPtr& d = deref(t);
    if (d->is_variable()) return d->var() == v;
    if (d->ground()) return false;
    for (const auto& a : d->args()) {
      if (occurs(v, a)) return true;
    }
    return false;
  }

  void bind(VarId v, TermPtr t) { map_.emplace(v, std::move(t)); }

  TermPtr resolve(const TermPtr& t) const {
    const TermPtr& d = deref(t);
    if (d->is_variable() || d->ground()) return d;
    std::vector<TermPtr> args;
    args.reserve(d->args().size());
    bool changed = false;
    for (const auto& a : d->args()) {
      args.push_back(resolve(a));
      changed = changed || args.back() != a;
    }
    return changed ? Term::apply(d->symbol(), std::move(args)) : d;
  }

  Substitution finish() const {
    Substitution s;
    for (const auto& [v, t] : map_) s.bind(v, resolve(t));
    return s;
  }

 private:
  std::unordered_map<VarId, TermPtr> map_;
};

bool unify_into(Bindings& b, const TermPtr& x, const TermPtr& y, UnifyFailure& why) {
  std::vector<std::pair<TermPtr, TermPtr>> work{{x, y}};
  while (!work.empty()) {
    auto [s, t] = std::move(work.back());
    work.pop_back();
    const TermPtr& ds = b.deref(s);
    const TermPtr& dt = b.deref(t);
    if (ds == dt) continue;
    if (ds->is_variable() && dt->is_variable() && ds->var() == dt->var()) continue;
    if (ds->is_variable() || dt->is_variable()) {
      const TermPtr& var = ds->is_variable() ? ds : dt;
      const TermPtr& other = ds->is_variable() ? dt : ds;
      if (b.occurs(var->var(), other)) {
        why = UnifyFailure::OccursCheck;
        return false;
      }
      b.bind(var->var(), other);
      continue;
    }
    if (ds->symbol() != dt->symbol() || ds->args().size() != dt->args().size()) {
      why = UnifyFailure::Clash;
      return false;
    }
    for (std::size_t i = ds->args().size(); i-- > 0;) work.emplace_back(ds->args()[i], dt->args()[i]);
  }
  return true;
}

}  // namespace

UnifyResult unify(const TermPtr& a, const TermPtr& b) {
  Bindings bind;
  UnifyResult r;
  if (unify_into(bind, a, b, r.failure)) r.mgu = bind.finish();
  return r;
}

UnifyResult unify_atoms(const Literal& a, const Literal& b) {
  UnifyResult r;
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) {
    r.failure = UnifyFailure::Clash;
    return r;
  }
  Bindings bind;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!unify_into(bind, a.args[i], b.args[i], r.failure)) return r;
  }
  r.mgu = bind.finish();
  return r;
}

bool match(const TermPtr& pattern, const TermPtr& target, Substitution& sigma) {
  if (pattern->is_variable()) {
    if (const TermPtr* img = sigma.lookup(pattern->var())) return equal(*img, target);
    sigma.bind(pattern->var(), target);
    return true;
  }
  if (target->is_variable() || pattern->symbol() != target->symbol() ||
      pattern->args().size() != target->args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern->args().size(); ++i) {
    if (!match(pattern->args()[i], target->args()[i], sigma)) return false;
  }
  return true;
}

namespace {

using VarMap = std::unordered_map<VarId, VarId>;

bool rename_match(const Term& a, const Term& b, VarMap& fwd, VarMap& bwd) {
  if (a.is_variable() != b.is_variable()) return false;
  if (a.is_variable()) {
    auto f = fwd.find(a.var());
    auto r = bwd.find(b.var());
    if (f == fwd.end() && r == bwd.end()) {
      fwd.emplace(a.var(), b.var());
      bwd.emplace(b.var(), a.var());
      return true;
    }
    return f != fwd.end() && r != bwd.end() && f->second == b.var() && r->second == a.var();
  }
  if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!rename_match(*a.args()[i], *b.args()[i], fwd, bwd)) return false;
  }
  return true;
}

bool variant_search(const Clause& a, const Clause& b, std::size_t i, std::vector<bool>& used,
                    const VarMap& fwd, const VarMap& bwd) {
  if (i == a.literals.size()) return true;
  const Literal& la = a.literals[i];
  for (std::size_t j = 0; j < b.literals.size(); ++j) {
    const Literal& lb = b.literals[j];
    if (used[j] || la.positive != lb.positive || la.predicate != lb.predicate) continue;
    VarMap f = fwd;
    VarMap r = bwd;
    bool ok = true;
    for (std::size_t k = 0; ok && k < la.args.size(); ++k) ok = rename_match(*la.args[k], *lb.args[k], f, r);
    if (!ok) continue;
    used[j] = true;
    if (variant_search(a, b, i + 1, used, f, r)) return true;
    used[j] = false;
  }
  return false;
}

bool subsume_search(const Clause& g, const Clause& s, std::size_t i, const Substitution& sigma) {
  if (i == g.literals.size()) return true;
  const Literal& lg = g.literals[i];
  for (const Literal& ls : s.literals) {
    if (lg.positive != ls.positive || lg.predicate != ls.predicate) continue;
    Substitution next = sigma;
    bool ok = true;
    for (std::size_t k = 0; ok && k < lg.args.size(); ++k) ok = match(lg.args[k], ls.args[k], next);
    if (ok && subsume_search(g, s, i + 1, next)) return true;
  }
  return false;
}

}  // namespace

bool is_variant(const Clause& a, const Clause& b) {
  if (a.literals.size() != b.literals.size()) return false;
  std::vector<bool> used(b.literals.size(), false);
  return variant_search(a, b, 0, used, {}, {});
}

bool subsumes(const Clause& general, const Clause& specific) {
  if (general.literals.size() > specific.literals.size()) return false;
  return subsume_search(general, specific, 0, Substitution{});
}

}  // namespace saturn::fol
