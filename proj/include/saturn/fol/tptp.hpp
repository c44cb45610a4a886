#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "saturn/fol/problem.hpp"

namespace saturn::fol {

/// Syntax or semantic error in TPTP input, with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the CNF subset of TPTP: `cnf(name, role, formula[, annotations]).`
/// with roles axiom, hypothesis (read as axiom) and negated_conjecture.
/// Comments (`%` and `/* */`) are skipped. `$false` denotes the empty clause.
Problem parse_tptp(std::string_view text, std::string name = "problem");
Problem parse_tptp_file(const std::filesystem::path& path);

/// Parses a bare disjunction such as `p(X) | ~q(a)` into literals, interning
/// symbols into `symbols` and numbering variables from `fresh`. Literal
/// order is preserved.
std::vector<Literal> parse_literals(std::string_view text, SymbolTable& symbols,
                                    FreshVars& fresh);

std::string to_string(const TermPtr& t, const SymbolTable& symbols);
std::string to_string(const Literal& l, const SymbolTable& symbols);
/// The disjunction alone, `$false` for the empty clause.
std::string formula_string(const Clause& c, const SymbolTable& symbols);
/// Full `cnf(...)` statement. Derived clauses are printed with role `plain`.
std::string to_tptp(const Clause& c, const SymbolTable& symbols);
/// One statement per line, inputs in id order.
std::string to_tptp(const Problem& p);

}  // namespace saturn::fol
