#include "saturn/vec/config.hpp"

#include <stdexcept>

namespace saturn::vec {

std::string_view gnn_name(GnnKind k) {
  switch (k) {
    case GnnKind::None: return "none";
    case GnnKind::Gcn: return "gcn";
    case GnnKind::Sage: return "sage";
    case GnnKind::Staged: return "staged";
  }
  return "?";
}

GnnKind parse_gnn(std::string_view name) {
  if (name == "none") return GnnKind::None;
  if (name == "gcn") return GnnKind::Gcn;
  if (name == "sage") return GnnKind::Sage;
  if (name == "staged") return GnnKind::Staged;
  throw std::invalid_argument("unknown gnn kind: " + std::string(name));
}

std::vector<std::string> VectorizerConfig::validate() const {
  std::vector<std::string> errs;
  if (simple && n_age == 0) errs.emplace_back("n_age must be positive");
  if (chain && d_chain == 0) errs.emplace_back("d_chain must be positive");
  if (!walk_lengths.empty() && d_walk == 0) errs.emplace_back("d_walk must be positive");
  for (int l : walk_lengths)
    if (l < 1 || l > 3) errs.push_back("walk length " + std::to_string(l) + " is outside 1..3");
  if (gnn != GnnKind::None) {
    if (d == 0) errs.emplace_back("d must be positive");
    if (rounds == 0) errs.emplace_back("rounds must be at least 1");
    if (vocab == 0) errs.emplace_back("vocab must be positive");
  }
  if (length() == 0) errs.emplace_back("no vectorizer module is enabled");
  return errs;
}

}  // namespace saturn::vec
