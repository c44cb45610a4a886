#include "saturn/fol/canonical.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

namespace saturn::fol {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename VarText>
void write_term(std::string& out, const Term& t, const SymbolTable& symbols, VarText&& var_text) {
  if (t.is_variable()) {
    out += var_text(t.var());
    return;
  }
  out += symbols[t.symbol()].name;
  if (t.args().empty()) return;
  out.push_back('(');
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out.push_back(',');
    write_term(out, *t.args()[i], symbols, var_text);
  }
  out.push_back(')');
}

template <typename VarText>
std::string literal_text(const Literal& l, const SymbolTable& symbols, VarText&& var_text) {
  std::string out(l.positive ? "+" : "-");
  out += symbols[l.predicate].name;
  out.push_back('(');
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (i) out.push_back(',');
    write_term(out, *l.args[i], symbols, var_text);
  }
  out.push_back(')');
  return out;
}

void occurrences(const Term& t, std::string& path, const std::string& lit,
                 std::map<VarId, std::vector<std::string>>& sig) {
  if (t.is_variable()) {
    sig[t.var()].push_back(lit + "@" + path);
    return;
  }
  const std::size_t base = path.size();
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    path += "." + std::to_string(i);
    occurrences(*t.args()[i], path, lit, sig);
    path.resize(base);
  }
}

int compare_literals(const Literal& a, const Literal& b) {
  if (a.positive != b.positive) return a.positive ? -1 : 1;
  if (a.predicate != b.predicate) return a.predicate < b.predicate ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size() && i < b.args.size(); ++i) {
    if (int c = compare(*a.args[i], *b.args[i]); c != 0) return c;
  }
  return a.args.size() < b.args.size() ? -1 : (a.args.size() > b.args.size() ? 1 : 0);
}

}  // namespace

std::vector<std::string> literal_keys(const Clause& c, const SymbolTable& symbols) {
  std::vector<std::string> blind;
  blind.reserve(c.literals.size());
  for (const auto& l : c.literals) {
    blind.push_back(literal_text(l, symbols, [](VarId) { return std::string("*"); }));
  }

  std::map<VarId, std::vector<std::string>> sig;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    std::string path;
    for (std::size_t a = 0; a < c.literals[i].args.size(); ++a) {
      path = std::to_string(a);
      occurrences(*c.literals[i].args[a], path, blind[i], sig);
    }
  }
  std::map<VarId, std::string> color;
  for (auto& [v, occ] : sig) {
    std::sort(occ.begin(), occ.end());
    std::string joined;
    for (const auto& o : occ) {
      joined += o;
      joined.push_back(';');
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "#%016llx", static_cast<unsigned long long>(fnv1a(joined)));
    color.emplace(v, buf);
  }

  std::vector<std::string> keys;
  keys.reserve(c.literals.size());
  for (const auto& l : c.literals) {
    keys.push_back(literal_text(l, symbols, [&](VarId v) { return color.at(v); }));
  }
  return keys;
}

void canonicalize(Clause& c, const SymbolTable& symbols) {
  if (c.literals.size() < 2) return;
  const auto keys = literal_keys(c, symbols);
  std::vector<std::size_t> order(c.literals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return compare_literals(c.literals[a], c.literals[b]) < 0;
  });
  std::vector<Literal> sorted;
  sorted.reserve(order.size());
  for (std::size_t i : order) sorted.push_back(std::move(c.literals[i]));
  c.literals = std::move(sorted);
}

std::string variant_key(const Clause& c, const SymbolTable& symbols) {
  auto keys = literal_keys(c, symbols);
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) {
    out += k;
    out.push_back('|');
  }
  return out;
}

}  // namespace saturn::fol
