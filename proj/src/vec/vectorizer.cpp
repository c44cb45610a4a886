#include "saturn/vec/vectorizer.hpp"

#include "saturn/fol/dag.hpp"
#include "saturn/vec/gnn.hpp"
#include "saturn/vec/sparse.hpp"

namespace saturn::vec {

nn::Var vectorize_clause(nn::Tape& t, const fol::Clause& c, const fol::SymbolTable& symbols,
                         nn::ParamStore& params, const VectorizerConfig& cfg) {
  const fol::Clause* one[] = {&c};
  return vectorize_clauses(t, one, symbols, params, cfg);
}

nn::Vector vectorize_clause(const fol::Clause& c, const fol::SymbolTable& symbols, nn::ParamStore& params,
                            const VectorizerConfig& cfg) {
  nn::Tape t;
  return vectorize_clause(t, c, symbols, params, cfg).value().col(0);
}

nn::Var vectorize_clauses(nn::Tape& t, std::span<const fol::Clause* const> clauses,
                          const fol::SymbolTable& symbols, nn::ParamStore& params,
                          const VectorizerConfig& cfg, const nn::Matrix* sparse) {
  const auto n = static_cast<nn::Index>(clauses.size());
  const auto ds = static_cast<nn::Index>(cfg.sparse_length());
  std::vector<nn::Var> parts;
  if (ds > 0) {
    if (sparse != nullptr) {
      if (sparse->rows() != ds || sparse->cols() != n) throw nn::ShapeError("precomputed sparse block has wrong shape");
      parts.push_back(t.constant(*sparse));
    } else {
      nn::Matrix m(ds, n);
      for (nn::Index j = 0; j < n; ++j) m.col(j) = sparse_features(*clauses[static_cast<std::size_t>(j)], symbols, cfg);
      parts.push_back(t.constant(std::move(m)));
    }
  }
  if (cfg.gnn != GnnKind::None) parts.push_back(gnn_columns(t, clauses, symbols, params, cfg));
  if (parts.empty()) throw std::invalid_argument("no vectorizer module is enabled");
  return parts.size() == 1 ? parts[0] : nn::concat(parts);
}

nn::SparseMatrix sparse_columns(std::span<const fol::Clause* const> clauses, const fol::SymbolTable& symbols,
                                const VectorizerConfig& cfg) {
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    const nn::Vector v = sparse_features(*clauses[j], symbols, cfg);
    for (nn::Index i = 0; i < v.size(); ++i)
      if (v(i) != 0.0) entries.emplace_back(i, static_cast<nn::Index>(j), v(i));
  }
  nn::SparseMatrix m(static_cast<nn::Index>(cfg.sparse_length()), static_cast<nn::Index>(clauses.size()));
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

nn::Var gnn_columns(nn::Tape& t, std::span<const fol::Clause* const> clauses, const fol::SymbolTable& symbols,
                    nn::ParamStore& params, const VectorizerConfig& cfg) {
  if (cfg.gnn == GnnKind::None) throw std::invalid_argument("no graph vectorizer configured");
  if (clauses.empty()) throw std::invalid_argument("no clauses to embed");
  std::vector<nn::Var> cols;
  cols.reserve(clauses.size());
  for (const fol::Clause* c : clauses) cols.push_back(gnn_embed(t, fol::clause_to_dag(*c, symbols), params, cfg));
  return cols.size() == 1 ? cols[0] : nn::hcat(cols);
}

}  // namespace saturn::vec
