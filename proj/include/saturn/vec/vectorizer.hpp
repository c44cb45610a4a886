#pragma once

#include <span>

#include "saturn/fol/clause.hpp"
#include "saturn/nn/ops.hpp"
#include "saturn/vec/config.hpp"

namespace saturn::vec {

/// Full clause vector: sparse modules followed by the graph embedding.
/// Without a GNN the result is a constant on the tape.
nn::Var vectorize_clause(nn::Tape& t, const fol::Clause& c, const fol::SymbolTable& symbols,
                         nn::ParamStore& params, const VectorizerConfig& cfg);

/// Plain evaluation, no gradient.
nn::Vector vectorize_clause(const fol::Clause& c, const fol::SymbolTable& symbols,
                            nn::ParamStore& params, const VectorizerConfig& cfg);

/// One column per clause. `sparse` may hold precomputed sparse parts (one
/// column per clause) to skip recomputing them.
nn::Var vectorize_clauses(nn::Tape& t, std::span<const fol::Clause* const> clauses,
                          const fol::SymbolTable& symbols, nn::ParamStore& params,
                          const VectorizerConfig& cfg, const nn::Matrix* sparse = nullptr);

/// Sparse modules only, one sparse column per clause.
nn::SparseMatrix sparse_columns(std::span<const fol::Clause* const> clauses, const fol::SymbolTable& symbols,
                                const VectorizerConfig& cfg);

/// Graph embeddings only (d x n); requires cfg.gnn != None.
nn::Var gnn_columns(nn::Tape& t, std::span<const fol::Clause* const> clauses, const fol::SymbolTable& symbols,
                    nn::ParamStore& params, const VectorizerConfig& cfg);

}  // namespace saturn::vec
