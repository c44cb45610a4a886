#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "saturn/fol/dag.hpp"

namespace saturn::vec {

/// Node batches; batch i holds the nodes whose longest path to a sink is i.
using StageSchedule = std::vector<std::vector<std::uint32_t>>;

class CycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Levels over edges parent -> child, or child -> parent when `reversed`.
StageSchedule topological_levels(std::size_t num_nodes, std::span<const fol::DagEdge> edges,
                                 bool reversed = false);

inline StageSchedule topological_levels(const fol::FormulaDag& g, bool reversed = false) {
  return topological_levels(g.nodes.size(), g.edges, reversed);
}

}  // namespace saturn::vec
