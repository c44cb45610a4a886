#pragma once

#include "saturn/fol/dag.hpp"
#include "saturn/nn/ops.hpp"
#include "saturn/vec/config.hpp"

namespace saturn::vec {

using nn::Index;
using nn::Matrix;
using nn::ParamStore;
using nn::Tape;
using nn::Var;

/// Column of the symbol embedding table used for a DAG node: MD5 bucket of
/// the symbol name, or one of the reserved columns after the buckets.
Index embedding_column(const fol::DagNode& n, std::size_t vocab);
inline constexpr std::size_t kReservedColumns = 4;  // variable, negation, root, unknown

/// Registers the embedding table and the parameters of `cfg.gnn`.
void init_gnn_params(ParamStore& params, const VectorizerConfig& cfg, Rng& rng);

/// d x n matrix of initial node embeddings.
Var initial_embeddings(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg);

/// Undirected, deduplicated neighbour lists.
std::vector<std::vector<std::uint32_t>> undirected_neighbors(const fol::FormulaDag& g);

Var gcn_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg);
Var sage_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg);
/// Node embeddings after all StagedGCN iterations, before the readout.
Var staged_nodes(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg);
Var staged_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg);

/// Dispatches on cfg.gnn; d x 1 graph vector.
Var gnn_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg);

}  // namespace saturn::vec
