#include "saturn/fol/dag.hpp"

#include <map>
#include <tuple>
#include <unordered_map>

namespace saturn::fol {

std::uint8_t arg_edge_type(std::size_t position_zero_based) {
  return position_zero_based < kMaxArgPositions ? static_cast<std::uint8_t>(position_zero_based)
                                                : kOverflowEdge;
}

namespace {

class DagBuilder {
 public:
  explicit DagBuilder(const SymbolTable& symbols) : symbols_(symbols) {}

  FormulaDag build(const Clause& c) {
    std::vector<std::uint32_t> lits;
    std::vector<std::uint8_t> types;
    for (const auto& l : c.literals) {
      std::vector<std::uint32_t> args;
      std::vector<std::uint8_t> arg_types;
      for (std::size_t i = 0; i < l.args.size(); ++i) {
        args.push_back(term(*l.args[i]));
        arg_types.push_back(arg_edge_type(i));
      }
      const Symbol& p = symbols_[l.predicate];
      std::uint32_t atom = node(NodeClass::Predicate, p.name, p.arity, args, arg_types);
      if (!l.positive) atom = node(NodeClass::Negation, "", 1, {atom}, {kNegationEdge});
      lits.push_back(atom);
      types.push_back(kMemberEdge);
    }
    dag_.root = fresh_node(NodeClass::ClauseRoot, "", static_cast<std::uint32_t>(lits.size()), lits, types);
    return std::move(dag_);
  }

 private:
  std::uint32_t term(const Term& t) {
    if (t.is_variable()) {
      auto it = vars_.find(t.var());
      if (it != vars_.end()) return it->second;
      const auto id = fresh_node(NodeClass::Variable, "", 0, {}, {});
      vars_.emplace(t.var(), id);
      return id;
    }
    std::vector<std::uint32_t> args;
    std::vector<std::uint8_t> types;
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      args.push_back(term(*t.args()[i]));
      types.push_back(arg_edge_type(i));
    }
    const Symbol& f = symbols_[t.symbol()];
    return node(args.empty() ? NodeClass::Constant : NodeClass::Function, f.name, f.arity, args, types);
  }

  std::uint32_t node(NodeClass cls, const std::string& label, std::uint32_t arity,
                     const std::vector<std::uint32_t>& children, const std::vector<std::uint8_t>& types) {
    auto key = std::make_tuple(static_cast<int>(cls), label, children);
    if (auto it = merged_.find(key); it != merged_.end()) return it->second;
    const auto id = fresh_node(cls, label, arity, children, types);
    merged_.emplace(std::move(key), id);
    return id;
  }

  std::uint32_t fresh_node(NodeClass cls, const std::string& label, std::uint32_t arity,
                           const std::vector<std::uint32_t>& children, const std::vector<std::uint8_t>& types) {
    const auto id = static_cast<std::uint32_t>(dag_.nodes.size());
    dag_.nodes.push_back(DagNode{cls, label, arity});
    for (std::size_t i = 0; i < children.size(); ++i) dag_.edges.push_back(DagEdge{id, children[i], types[i]});
    return id;
  }

  const SymbolTable& symbols_;
  FormulaDag dag_;
  std::unordered_map<VarId, std::uint32_t> vars_;
  std::map<std::tuple<int, std::string, std::vector<std::uint32_t>>, std::uint32_t> merged_;
};

}  // namespace

FormulaDag clause_to_dag(const Clause& c, const SymbolTable& symbols) {
  return DagBuilder(symbols).build(c);
}

}  // namespace saturn::fol
