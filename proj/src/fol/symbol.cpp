#include "saturn/fol/symbol.hpp"

namespace saturn::fol {

std::string SymbolTable::key(std::string_view name, bool predicate, std::uint32_t arity) {
  std::string k(predicate ? "P:" : "F:");
  k.append(name);
  k.push_back('/');
  k.append(std::to_string(arity));
  return k;
}

SymbolId SymbolTable::intern(std::string_view name, SymbolKind kind, std::uint32_t arity) {
  if (kind == SymbolKind::Variable) throw std::invalid_argument("variables are not interned");
  if (kind == SymbolKind::Function && arity == 0) kind = SymbolKind::Constant;
  if (kind == SymbolKind::Constant && arity != 0) kind = SymbolKind::Function;

  const std::string name_str(name);
  if (auto it = arity_of_name_.find(name_str); it != arity_of_name_.end()) {
    if (it->second != arity) {
      throw ArityConflict("symbol '" + name_str + "' used with arities " +
                          std::to_string(it->second) + " and " + std::to_string(arity));
    }
  } else {
    arity_of_name_.emplace(name_str, arity);
  }

  const auto k = key(name, kind == SymbolKind::Predicate, arity);
  if (auto it = index_.find(k); it != index_.end()) return it->second;
  const auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{id, name_str, kind, arity});
  index_.emplace(k, id);
  return id;
}

bool SymbolTable::find(std::string_view name, SymbolKind kind, std::uint32_t arity,
                       SymbolId& out) const {
  auto it = index_.find(key(name, kind == SymbolKind::Predicate, arity));
  if (it == index_.end()) return false;
  out = it->second;
  return true;
}

}  // namespace saturn::fol
