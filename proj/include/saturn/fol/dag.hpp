#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saturn/fol/clause.hpp"
#include "saturn/fol/symbol.hpp"

namespace saturn::fol {

enum class NodeClass : std::uint8_t { ClauseRoot, Negation, Predicate, Function, Constant, Variable };

/// Argument positions 1..kMaxArgPositions get their own edge type; larger
/// positions share the overflow type.
inline constexpr std::uint8_t kMaxArgPositions = 8;
inline constexpr std::uint8_t kOverflowEdge = kMaxArgPositions;
inline constexpr std::uint8_t kMemberEdge = kMaxArgPositions + 1;    // clause root -> literal
inline constexpr std::uint8_t kNegationEdge = kMaxArgPositions + 2;  // negation -> atom
inline constexpr std::uint8_t kNumEdgeTypes = kMaxArgPositions + 3;

std::uint8_t arg_edge_type(std::size_t position_zero_based);

struct DagNode {
  NodeClass cls = NodeClass::Variable;
  /// Symbol name for predicates, functions and constants; empty otherwise.
  std::string label;
  std::uint32_t arity = 0;
};

struct DagEdge {
  std::uint32_t parent = 0;
  std::uint32_t child = 0;
  std::uint8_t type = 0;

  bool operator==(const DagEdge&) const = default;
};

/// Clause graph with identical subtrees merged. Nodes are stored children
/// first, so every edge goes from a higher id to a lower id and the root is
/// the last node.
struct FormulaDag {
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;
  std::uint32_t root = 0;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Builds the merged graph of `c`. Literals are visited in stored order and
/// variables are numbered by first occurrence, so variants with the same
/// literal order produce identical graphs.
FormulaDag clause_to_dag(const Clause& c, const SymbolTable& symbols);

}  // namespace saturn::fol
