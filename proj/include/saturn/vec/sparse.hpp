#pragma once

#include <map>
#include <string>
#include <vector>

#include "saturn/fol/clause.hpp"
#include "saturn/nn/tensor.hpp"
#include "saturn/vec/config.hpp"

namespace saturn::vec {

using nn::Vector;

/// Age one-hot (capped at n_age - 1), weight, literal count, sos bit.
Vector simple_features(const fol::Clause& c, std::size_t n_age);

/// A root-to-leaf path of one literal. Siblings off the path print as `_`
/// and variables as `*`, e.g. `q(f(g(*,_),_),_)`.
struct Pattern {
  bool positive = true;
  std::string text;

  auto operator<=>(const Pattern&) const = default;
};

/// Multiset of chain patterns, merged across literals.
std::map<Pattern, std::size_t> chain_patterns(const fol::Clause& c, const fol::SymbolTable& symbols);

/// Positive patterns hashed into the first d_chain entries, negative ones
/// into the second half, each entry holding summed multiplicities.
Vector chain_vectorize(const std::map<Pattern, std::size_t>& patterns, std::size_t d_chain);

/// Counts of downward walks of exactly `length` symbols over the parse
/// trees of the literals. Symbols are joined by `/`, variables print as `*`
/// and walks that start at a predicate carry a `+` or `-` prefix.
std::map<std::string, std::size_t> term_walk_strings(const fol::Clause& c, int length,
                                                     const fol::SymbolTable& symbols);

Vector term_walks(const fol::Clause& c, int length, std::size_t d_walk, const fol::SymbolTable& symbols);

/// All enabled sparse modules concatenated: simple, chain, walks by length.
Vector sparse_features(const fol::Clause& c, const fol::SymbolTable& symbols, const VectorizerConfig& cfg);

}  // namespace saturn::vec
