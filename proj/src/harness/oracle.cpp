#include "saturn/harness/oracle.hpp"

#include <unordered_map>

#include "saturn/fol/canonical.hpp"
#include "saturn/fol/unify.hpp"

namespace saturn::harness {

namespace {

using fol::Clause;
using fol::Literal;

std::vector<Literal> substituted(const fol::Substitution& s, const std::vector<Literal>& lits, std::size_t skip) {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < lits.size(); ++i)
    if (i != skip) out.push_back(s.apply(lits[i]));
  return out;
}

class Closure {
 public:
  Closure(const fol::Problem& p, std::size_t max_clauses)
      : symbols_(*p.symbols), fresh_(p.next_var), max_clauses_(max_clauses) {}

  /// False if `c` was dropped as a tautology or variant.
  bool add(Clause c, int level) {
    fol::dedupe_literals(c.literals);
    if (fol::is_tautology(c)) return false;
    auto& bucket = seen_[fol::variant_key(c, symbols_)];
    for (std::size_t i : bucket)
      if (fol::is_variant(clauses_[i], c)) return false;
    if (c.empty()) empty_level_ = level;
    bucket.push_back(clauses_.size());
    clauses_.push_back(std::move(c));
    levels_.push_back(level);
    return true;
  }

  /// Adds level `k` from the clauses of level k-1. Returns false if nothing new appeared.
  bool expand(int k) {
    const std::size_t n = clauses_.size();
    bool grew = false;
    std::vector<Clause> fresh;
    for (std::size_t i = 0; i < n; ++i) {
      if (levels_[i] != k - 1) continue;
      for (std::size_t j = 0; j <= i; ++j) {
        fresh.clear();
        resolve(clauses_[i], fol::rename_apart(clauses_[j], fresh_), fresh);
        if (j == i) factor(clauses_[i], fresh);
        for (auto& c : fresh) {
          grew = add(std::move(c), k) || grew;
          if (empty_level_ >= 0 || over_limit()) return true;
        }
      }
    }
    return grew;
  }

  [[nodiscard]] int empty_level() const noexcept { return empty_level_; }
  [[nodiscard]] std::size_t size() const noexcept { return clauses_.size(); }
  [[nodiscard]] bool over_limit() const noexcept { return clauses_.size() > max_clauses_; }

 private:
  static void resolve(const Clause& c, const Clause& d, std::vector<Clause>& out) {
    for (std::size_t a = 0; a < c.literals.size(); ++a) {
      for (std::size_t b = 0; b < d.literals.size(); ++b) {
        const Literal& x = c.literals[a];
        const Literal& y = d.literals[b];
        if (x.positive == y.positive || x.predicate != y.predicate) continue;
        auto u = fol::unify_atoms(x, y);
        if (!u) continue;
        Clause r;
        r.literals = substituted(*u.mgu, c.literals, a);
        for (auto& l : substituted(*u.mgu, d.literals, b)) r.literals.push_back(std::move(l));
        out.push_back(std::move(r));
      }
    }
  }

  static void factor(const Clause& c, std::vector<Clause>& out) {
    for (std::size_t a = 0; a < c.literals.size(); ++a) {
      for (std::size_t b = a + 1; b < c.literals.size(); ++b) {
        const Literal& x = c.literals[a];
        const Literal& y = c.literals[b];
        if (x.positive != y.positive || x.predicate != y.predicate) continue;
        auto u = fol::unify_atoms(x, y);
        if (!u) continue;
        Clause r;
        r.literals = substituted(*u.mgu, c.literals, b);
        out.push_back(std::move(r));
      }
    }
  }

  const fol::SymbolTable& symbols_;
  fol::FreshVars fresh_;
  std::size_t max_clauses_;
  std::vector<Clause> clauses_;
  std::vector<int> levels_;
  std::unordered_map<std::string, std::vector<std::size_t>> seen_;
  int empty_level_ = -1;
};

}  // namespace

OracleResult bfs_refute(const fol::Problem& p, int max_depth, std::size_t max_clauses) {
  Closure cl(p, max_clauses);
  for (const Clause* c : p.inputs()) cl.add(*c, 0);
  OracleResult r;
  for (int k = 1;; ++k) {
    if (cl.empty_level() >= 0) {
      r.verdict = Verdict::Refuted;
      r.depth = cl.empty_level();
      break;
    }
    if (cl.over_limit() || k > max_depth) break;
    if (!cl.expand(k)) {
      r.verdict = Verdict::Saturated;
      break;
    }
  }
  r.clauses = cl.size();
  return r;
}

std::vector<std::string> minimal_refutable_core(const fol::Problem& p, int max_depth, std::size_t max_clauses) {
  if (bfs_refute(p, max_depth, max_clauses).verdict != Verdict::Refuted) return {};
  std::vector<const Clause*> core = p.inputs();
  for (std::size_t i = 0; i < core.size();) {
    fol::Problem q;
    q.name = p.name;
    q.symbols = p.symbols;
    q.next_var = p.next_var;
    for (std::size_t j = 0; j < core.size(); ++j)
      if (j != i) q.axioms.push_back(*core[j]);
    if (bfs_refute(q, max_depth, max_clauses).verdict == Verdict::Refuted) {
      core.erase(core.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  std::vector<std::string> names;
  for (const Clause* c : core) names.push_back(c->name);
  return names;
}

bool ground_satisfiable(const fol::Problem& p) {
  std::unordered_map<std::string, int> atom;
  std::vector<std::vector<std::pair<int, bool>>> cnf;
  for (const Clause* c : p.inputs()) {
    if (!c->ground()) throw std::invalid_argument("clause " + c->name + " is not ground");
    std::vector<std::pair<int, bool>> lits;
    for (const auto& l : c->literals) {
      Literal pos = l;
      pos.positive = true;
      Clause one;
      one.literals.push_back(pos);
      const std::string key = fol::variant_key(one, *p.symbols);
      auto [it, _] = atom.try_emplace(key, static_cast<int>(atom.size()));
      lits.emplace_back(it->second, l.positive);
    }
    cnf.push_back(std::move(lits));
  }
  if (atom.size() > 20) throw std::invalid_argument("too many atoms for a truth table");
  const std::uint32_t n = static_cast<std::uint32_t>(atom.size());
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    bool ok = true;
    for (const auto& cl : cnf) {
      bool sat = false;
      for (auto [a, pos] : cl) sat = sat || (((m >> a) & 1u) != 0) == pos;
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace saturn::harness
