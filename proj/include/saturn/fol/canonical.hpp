#pragma once

#include <string>
#include <vector>

#include "saturn/fol/clause.hpp"
#include "saturn/fol/symbol.hpp"

namespace saturn::fol {

/// Renaming-invariant key for each literal of `c`. Variables are replaced by
/// a signature of where they occur in the clause, so two variants of a
/// clause produce the same multiset of keys.
std::vector<std::string> literal_keys(const Clause& c, const SymbolTable& symbols);

/// Sorts literals by their renaming-invariant key, breaking exact ties by
/// structure. Used for every clause the engine stores.
void canonicalize(Clause& c, const SymbolTable& symbols);

/// Renaming-invariant key of the whole clause (sorted literal keys). Equal
/// for variants; distinct clauses may collide, so confirm with is_variant.
std::string variant_key(const Clause& c, const SymbolTable& symbols);

}  // namespace saturn::fol
