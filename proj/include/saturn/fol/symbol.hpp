#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace saturn::fol {

using SymbolId = std::uint32_t;
using VarId = std::uint32_t;

enum class SymbolKind : std::uint8_t { Predicate, Function, Constant, Variable };

struct Symbol {
  SymbolId id = 0;
  std::string name;
  SymbolKind kind = SymbolKind::Constant;
  std::uint32_t arity = 0;
};

/// Thrown when one name is used with two different arities in a problem.
class ArityConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-problem interning of predicate, function and constant symbols.
///
/// Variables are not interned: inside terms they are plain `VarId`s so that
/// renaming apart never has to grow the table. A table is filled by the
/// parser and treated as immutable afterwards.
class SymbolTable {
 public:
  /// Returns the id for (name, kind, arity), creating it on first use.
  /// Constants are functions of arity zero and are stored as `Constant`.
  SymbolId intern(std::string_view name, SymbolKind kind, std::uint32_t arity);

  [[nodiscard]] const Symbol& operator[](SymbolId id) const { return symbols_.at(id); }
  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
  [[nodiscard]] const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  /// Lookup without insertion; returns false if absent.
  bool find(std::string_view name, SymbolKind kind, std::uint32_t arity, SymbolId& out) const;

 private:
  static std::string key(std::string_view name, bool predicate, std::uint32_t arity);

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
  std::unordered_map<std::string, std::uint32_t> arity_of_name_;
};

}  // namespace saturn::fol
