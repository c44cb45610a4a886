#include "saturn/fol/term.hpp"

namespace saturn::fol {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Term::Term(bool is_var, std::uint32_t id, std::vector<TermPtr> args)
    : is_var_(is_var), ground_(!is_var), id_(id), args_(std::move(args)), size_(1) {
  hash_ = mix(is_var ? 0x51ULL : 0xa7ULL, id);
  for (const auto& a : args_) {
    hash_ = mix(hash_, a->hash());
    size_ += a->size();
    ground_ = ground_ && a->ground();
  }
}

TermPtr Term::variable(VarId v) { return std::make_shared<const Term>(true, v, std::vector<TermPtr>{}); }

TermPtr Term::apply(SymbolId f, std::vector<TermPtr> args) {
  return std::make_shared<const Term>(false, f, std::move(args));
}

bool equal(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.is_variable() != b.is_variable() || a.var() != b.var() ||
      a.args().size() != b.args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!equal(a.args()[i], b.args()[i])) return false;
  }
  return true;
}

bool occurs(VarId v, const Term& t) {
  if (t.is_variable()) return t.var() == v;
  if (t.ground()) return false;
  for (const auto& a : t.args()) {
    if (occurs(v, *a)) return true;
  }
  return false;
}

void collect_vars(const Term& t, std::vector<VarId>& out) {
  if (t.is_variable()) {
    for (VarId v : out) {
      if (v == t.var()) return;
    }
    out.push_back(t.var());
    return;
  }
  for (const auto& a : t.args()) collect_vars(*a, out);
}

int compare(const Term& a, const Term& b) {
  if (a.is_variable() != b.is_variable()) return a.is_variable() ? -1 : 1;
  if (a.var() != b.var()) return a.var() < b.var() ? -1 : 1;
  if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (int c = compare(*a.args()[i], *b.args()[i]); c != 0) return c;
  }
  return 0;
}

}  // namespace saturn::fol
