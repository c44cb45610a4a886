#include "saturn/fol/problem.hpp"

#include <algorithm>

namespace saturn::fol {

std::vector<const Clause*> Problem::inputs() const {
  std::vector<const Clause*> out;
  out.reserve(size());
  for (const auto& c : axioms) out.push_back(&c);
  for (const auto& c : negated_conjecture) out.push_back(&c);
  std::sort(out.begin(), out.end(), [](const Clause* a, const Clause* b) { return a->id < b->id; });
  return out;
}

}  // namespace saturn::fol
