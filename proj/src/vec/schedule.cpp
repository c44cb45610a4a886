#include "saturn/vec/schedule.hpp"

#include <algorithm>

namespace saturn::vec {

StageSchedule topological_levels(std::size_t num_nodes, std::span<const fol::DagEdge> edges, bool reversed) {
  // succ[u]: nodes u depends on (its children in the chosen direction)
  std::vector<std::vector<std::uint32_t>> succ(num_nodes);
  std::vector<std::uint32_t> indegree(num_nodes, 0);
  for (const auto& e : edges) {
    const auto from = reversed ? e.child : e.parent;
    const auto to = reversed ? e.parent : e.child;
    if (from >= num_nodes || to >= num_nodes) throw std::out_of_range("edge endpoint out of range");
    succ[from].push_back(to);
    ++indegree[to];
  }
  // Kahn's algorithm from the sources gives a topological order; levels are
  // then filled from the sinks up.
  std::vector<std::uint32_t> order;
  order.reserve(num_nodes);
  for (std::uint32_t u = 0; u < num_nodes; ++u)
    if (indegree[u] == 0) order.push_back(u);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto v : succ[order[i]])
      if (--indegree[v] == 0) order.push_back(v);
  }
  if (order.size() != num_nodes) throw CycleError("graph has a cycle");

  std::vector<std::size_t> level(num_nodes, 0);
  std::size_t max_level = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t lv = 0;
    for (auto v : succ[*it]) lv = std::max(lv, level[v] + 1);
    level[*it] = lv;
    max_level = std::max(max_level, lv);
  }
  StageSchedule out(num_nodes == 0 ? 0 : max_level + 1);
  for (std::uint32_t u = 0; u < num_nodes; ++u) out[level[u]].push_back(u);
  return out;
}

}  // namespace saturn::vec
