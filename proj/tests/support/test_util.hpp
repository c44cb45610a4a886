#pragma once

#include <string>

#include "saturn/fol/problem.hpp"
#include "saturn/fol/tptp.hpp"

namespace saturn::testing {

/// Builds a problem from a compact list: each line is `role: formula`.
inline fol::Problem problem_of(const std::string& lines, const std::string& name = "t") {
  std::string text;
  std::size_t start = 0;
  int k = 0;
  while (start < lines.size()) {
    std::size_t end = lines.find('\n', start);
    if (end == std::string::npos) end = lines.size();
    const std::string line = lines.substr(start, end - start);
    start = end + 1;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string role = line.substr(0, colon) == "c" ? "negated_conjecture" : "axiom";
    text += "cnf(c" + std::to_string(k++) + ", " + role + ", " + line.substr(colon + 1) + ").\n";
  }
  return fol::parse_tptp(text, name);
}

}  // namespace saturn::testing
