#include "saturn/vec/sparse.hpp"

#include <functional>

#include "saturn/fol/clause.hpp"
#include "saturn/vec/hashing.hpp"

namespace saturn::vec {

using fol::Clause;
using fol::SymbolTable;
using fol::TermPtr;

Vector simple_features(const Clause& c, std::size_t n_age) {
  Vector v = Vector::Zero(static_cast<nn::Index>(n_age + 3));
  v(static_cast<nn::Index>(std::min<std::size_t>(c.age, n_age - 1))) = 1.0;
  v(static_cast<nn::Index>(n_age)) = static_cast<double>(fol::clause_weight(c));
  v(static_cast<nn::Index>(n_age + 1)) = static_cast<double>(c.literals.size());
  v(static_cast<nn::Index>(n_age + 2)) = c.sos ? 1.0 : 0.0;
  return v;
}

namespace {

const std::string& name_of(fol::SymbolId id, const SymbolTable& symbols) { return symbols[id].name; }

// Emits one pattern per leaf. `wrap(inner)` rebuilds the enclosing context
// around the text of the current position.
void chain_paths(const TermPtr& t, const SymbolTable& symbols,
                 const std::function<std::string(const std::string&)>& wrap,
                 std::vector<std::string>& out) {
  if (t->is_variable()) {
    out.push_back(wrap("*"));
    return;
  }
  const std::string& f = name_of(t->symbol(), symbols);
  const auto args = t->args();
  if (args.empty()) {
    out.push_back(wrap(f));
    return;
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto inner = [&, i](const std::string& s) {
      std::string r = f + "(";
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (j) r += ",";
        r += j == i ? s : "_";
      }
      return wrap(r + ")");
    };
    chain_paths(args[i], symbols, inner, out);
  }
}

}  // namespace

std::map<Pattern, std::size_t> chain_patterns(const Clause& c, const SymbolTable& symbols) {
  std::map<Pattern, std::size_t> out;
  for (const auto& l : c.literals) {
    const std::string& p = name_of(l.predicate, symbols);
    if (l.args.empty()) {
      ++out[Pattern{l.positive, p}];
      continue;
    }
    std::vector<std::string> paths;
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      auto wrap = [&, i](const std::string& s) {
        std::string r = p + "(";
        for (std::size_t j = 0; j < l.args.size(); ++j) {
          if (j) r += ",";
          r += j == i ? s : "_";
        }
        return r + ")";
      };
      chain_paths(l.args[i], symbols, wrap, paths);
    }
    for (auto& s : paths) ++out[Pattern{l.positive, std::move(s)}];
  }
  return out;
}

Vector chain_vectorize(const std::map<Pattern, std::size_t>& patterns, std::size_t d_chain) {
  Vector v = Vector::Zero(static_cast<nn::Index>(2 * d_chain));
  for (const auto& [pat, n] : patterns) {
    const auto idx = md5_mod(pat.text, d_chain) + (pat.positive ? 0 : d_chain);
    v(static_cast<nn::Index>(idx)) += static_cast<double>(n);
  }
  return v;
}

namespace {

std::string label_of(const TermPtr& t, const SymbolTable& symbols) {
  return t->is_variable() ? std::string("*") : name_of(t->symbol(), symbols);
}

void walks_from(const TermPtr& t, const std::string& prefix, int remaining, const SymbolTable& symbols,
                std::map<std::string, std::size_t>& out) {
  const std::string here = prefix.empty() ? label_of(t, symbols) : prefix + "/" + label_of(t, symbols);
  if (remaining == 1) {
    ++out[here];
    return;
  }
  for (const auto& a : t->args()) walks_from(a, here, remaining - 1, symbols, out);
}

void walks_below(const TermPtr& t, int length, const SymbolTable& symbols,
                 std::map<std::string, std::size_t>& out) {
  walks_from(t, "", length, symbols, out);
  for (const auto& a : t->args()) walks_below(a, length, symbols, out);
}

}  // namespace

std::map<std::string, std::size_t> term_walk_strings(const Clause& c, int length, const SymbolTable& symbols) {
  std::map<std::string, std::size_t> out;
  if (length < 1) return out;
  for (const auto& l : c.literals) {
    const std::string head = (l.positive ? "+" : "-") + name_of(l.predicate, symbols);
    if (length == 1) {
      ++out[head];
    } else {
      for (const auto& a : l.args) walks_from(a, head, length - 1, symbols, out);
    }
    for (const auto& a : l.args) walks_below(a, length, symbols, out);
  }
  return out;
}

Vector term_walks(const Clause& c, int length, std::size_t d_walk, const SymbolTable& symbols) {
  Vector v = Vector::Zero(static_cast<nn::Index>(d_walk));
  for (const auto& [w, n] : term_walk_strings(c, length, symbols))
    v(static_cast<nn::Index>(md5_mod(w, d_walk))) += static_cast<double>(n);
  return v;
}

Vector sparse_features(const Clause& c, const SymbolTable& symbols, const VectorizerConfig& cfg) {
  Vector v(static_cast<nn::Index>(cfg.sparse_length()));
  nn::Index at = 0;
  auto put = [&](const Vector& part) {
    v.segment(at, part.size()) = part;
    at += part.size();
  };
  if (cfg.simple) put(simple_features(c, cfg.n_age));
  if (cfg.chain) put(chain_vectorize(chain_patterns(c, symbols), cfg.d_chain));
  for (int l : cfg.walk_lengths) put(term_walks(c, l, cfg.d_walk, symbols));
  return v;
}

}  // namespace saturn::vec
