#include "saturn/vec/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "saturn/vec/hashing.hpp"
#include "saturn/vec/schedule.hpp"

namespace saturn::vec {

using fol::NodeClass;

Index embedding_column(const fol::DagNode& n, std::size_t vocab) {
  const auto v = static_cast<Index>(vocab);
  switch (n.cls) {
    case NodeClass::Variable: return v;
    case NodeClass::Negation: return v + 1;
    case NodeClass::ClauseRoot: return v + 2;
    case NodeClass::Predicate:
    case NodeClass::Function:
    case NodeClass::Constant:
      if (n.label.empty()) break;
      return static_cast<Index>(md5_mod(n.label, vocab));
  }
  return v + 3;
}

namespace {

std::string layer(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

Matrix uniform_matrix(Index rows, Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, -bound, bound);
  return m;
}

const char* direction_name(bool down) { return down ? "staged.down" : "staged.up"; }

}  // namespace

void init_gnn_params(ParamStore& params, const VectorizerConfig& cfg, Rng& rng) {
  if (cfg.gnn == GnnKind::None) return;
  const auto d = static_cast<Index>(cfg.d);
  params.add("gnn.embed", uniform_matrix(d, static_cast<Index>(cfg.vocab + kReservedColumns), 1.0, rng));
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    switch (cfg.gnn) {
      case GnnKind::Gcn:
        params.add(layer("gcn.W", i), nn::init_fan_in(d, d, rng));
        break;
      case GnnKind::Sage:
        params.add(layer("sage.WA", i), nn::init_fan_in(d, d, rng));
        params.add(layer("sage.W", i), nn::init_fan_in(d, 2 * d, rng));
        break;
      case GnnKind::Staged:
        for (bool down : {false, true}) {
          const std::string p = layer(direction_name(down), i);
          params.add(p + ".W", nn::init_fan_in(d, d, rng));
          for (std::uint8_t r = 0; r < fol::kNumEdgeTypes; ++r)
            params.add(p + ".R" + std::to_string(r), nn::init_fan_in(d, d, rng));
          params.add(p + ".ln_gain", Matrix::Ones(d, 1));
          params.add(p + ".ln_bias", Matrix::Zero(d, 1));
        }
        {
          const std::string p = layer("staged.bd", i);
          params.add(p + ".W1", nn::init_fan_in(d, 2 * d, rng));
          params.add(p + ".b1", Matrix::Zero(d, 1));
          params.add(p + ".W2", nn::init_fan_in(d, d, rng));
          params.add(p + ".b2", Matrix::Zero(d, 1));
        }
        break;
      case GnnKind::None:
        break;
    }
  }
  if (cfg.gnn == GnnKind::Staged) {
    params.add("staged.out.W", nn::init_fan_in(d, d, rng));
    params.add("staged.out.ln_gain", Matrix::Ones(d, 1));
    params.add("staged.out.ln_bias", Matrix::Zero(d, 1));
  }
}

Var initial_embeddings(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg) {
  std::vector<Index> cols;
  cols.reserve(g.nodes.size());
  for (const auto& n : g.nodes) cols.push_back(embedding_column(n, cfg.vocab));
  return nn::select_columns(t.parameter(params.at("gnn.embed")), cols);
}

std::vector<std::vector<std::uint32_t>> undirected_neighbors(const fol::FormulaDag& g) {
  std::vector<std::set<std::uint32_t>> sets(g.nodes.size());
  for (const auto& e : g.edges) {
    if (e.parent == e.child) continue;
    sets[e.parent].insert(e.child);
    sets[e.child].insert(e.parent);
  }
  std::vector<std::vector<std::uint32_t>> out(g.nodes.size());
  for (std::size_t u = 0; u < sets.size(); ++u) out[u].assign(sets[u].begin(), sets[u].end());
  return out;
}

Var gcn_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg) {
  const auto n = static_cast<Index>(g.nodes.size());
  const auto nb = undirected_neighbors(g);
  // column u of H * S is the normalised aggregate for node u
  Matrix s = Matrix::Zero(n, n);
  for (Index u = 0; u < n; ++u) {
    const auto& nu = nb[static_cast<std::size_t>(u)];
    const double du = static_cast<double>(nu.size());
    s(u, u) = nu.empty() ? 1.0 : 1.0 / du;
    for (auto v : nu) s(v, u) = 1.0 / std::sqrt(du * static_cast<double>(nb[v].size()));
  }
  Var sv = t.constant(std::move(s));
  Var h = initial_embeddings(t, g, params, cfg);
  for (std::size_t i = 0; i < cfg.rounds; ++i)
    h = nn::relu(nn::matmul(t.parameter(params.at(layer("gcn.W", i))), nn::matmul(h, sv)));
  return nn::mean_pool(h);
}

Var sage_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg) {
  const auto n = static_cast<Index>(g.nodes.size());
  const auto nb = undirected_neighbors(g);
  Matrix m = Matrix::Zero(n, n);
  for (Index u = 0; u < n; ++u) {
    const auto& nu = nb[static_cast<std::size_t>(u)];
    const double w = 1.0 / static_cast<double>(nu.size() + 1);
    m(u, u) = w;
    for (auto v : nu) m(v, u) = w;
  }
  Var mv = t.constant(std::move(m));
  Var h = initial_embeddings(t, g, params, cfg);
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    Var agg = nn::relu(nn::matmul(t.parameter(params.at(layer("sage.WA", i))), nn::matmul(h, mv)));
    h = nn::relu(nn::matmul(t.parameter(params.at(layer("sage.W", i))), nn::concat({h, agg})));
  }
  return nn::mean_pool(h);
}

namespace {

// One directional pass of a StagedGCN iteration.
Var staged_direction(Tape& t, const fol::FormulaDag& g, const Var& prev, ParamStore& params,
                     const std::string& prefix, bool down) {
  const std::size_t n = g.nodes.size();
  const auto schedule = topological_levels(g, down);

  // in[u][r]: distinct neighbours feeding u through edge type r
  std::vector<std::vector<std::set<std::uint32_t>>> in(n, std::vector<std::set<std::uint32_t>>(fol::kNumEdgeTypes));
  for (const auto& e : g.edges) {
    if (down) {
      in[e.child][e.type].insert(e.parent);
    } else {
      in[e.parent][e.type].insert(e.child);
    }
  }

  Var self = nn::matmul(t.parameter(params.at(prefix + ".W")), prev);
  Var gain = t.parameter(params.at(prefix + ".ln_gain"));
  Var bias = t.parameter(params.at(prefix + ".ln_bias"));
  std::vector<Var> weights(fol::kNumEdgeTypes);

  std::vector<Var> done;
  std::vector<Index> position(n, -1);
  Index finished = 0;
  for (const auto& batch : schedule) {
    std::vector<Index> cols(batch.begin(), batch.end());
    Var pre = nn::select_columns(self, cols);
    if (finished > 0) {
      const Var earlier = done.size() == 1 ? done[0] : nn::hcat(done);
      for (std::uint8_t r = 0; r < fol::kNumEdgeTypes; ++r) {
        Matrix p = Matrix::Zero(finished, static_cast<Index>(batch.size()));
        bool any = false;
        for (std::size_t j = 0; j < batch.size(); ++j) {
          const auto& nbrs = in[batch[j]][r];
          for (auto v : nbrs) {
            p(position[v], static_cast<Index>(j)) = 1.0 / static_cast<double>(nbrs.size());
            any = true;
          }
        }
        if (!any) continue;
        if (!weights[r].valid()) weights[r] = t.parameter(params.at(prefix + ".R" + std::to_string(r)));
        pre = nn::add(pre, nn::matmul(weights[r], nn::matmul(earlier, t.constant(std::move(p)))));
      }
    }
    Var out = nn::add(nn::tanh(nn::layer_norm(pre, gain, bias)), nn::select_columns(prev, cols));
    for (auto u : batch) position[u] = finished++;
    done.push_back(out);
  }
  std::vector<Index> back(n);
  for (std::size_t u = 0; u < n; ++u) back[u] = position[u];
  return nn::select_columns(done.size() == 1 ? done[0] : nn::hcat(done), back);
}

}  // namespace

Var staged_nodes(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg) {
  Var h = initial_embeddings(t, g, params, cfg);
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    Var up = staged_direction(t, g, h, params, layer(direction_name(false), i), false);
    Var down = staged_direction(t, g, h, params, layer(direction_name(true), i), true);
    const std::string p = layer("staged.bd", i);
    Var hidden = nn::relu(nn::linear(nn::concat({up, down}), t.parameter(params.at(p + ".W1")),
                                     t.parameter(params.at(p + ".b1"))));
    Var ff = nn::linear(hidden, t.parameter(params.at(p + ".W2")), t.parameter(params.at(p + ".b2")));
    h = nn::add(nn::scale(nn::add(up, down), 0.5), ff);
  }
  return h;
}

Var staged_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg) {
  Var h = staged_nodes(t, g, params, cfg);
  Var summary;
  if (cfg.root_readout) {
    const Index root[] = {static_cast<Index>(g.root)};
    summary = nn::select_columns(h, root);
  } else {
    summary = nn::mean_pool(h);
  }
  return nn::relu(nn::layer_norm(nn::matmul(t.parameter(params.at("staged.out.W")), summary),
                                 t.parameter(params.at("staged.out.ln_gain")),
                                 t.parameter(params.at("staged.out.ln_bias"))));
}

Var gnn_embed(Tape& t, const fol::FormulaDag& g, ParamStore& params, const VectorizerConfig& cfg) {
  switch (cfg.gnn) {
    case GnnKind::Gcn: return gcn_embed(t, g, params, cfg);
    case GnnKind::Sage: return sage_embed(t, g, params, cfg);
    case GnnKind::Staged: return staged_embed(t, g, params, cfg);
    case GnnKind::None: break;
  }
  throw std::invalid_argument("gnn_embed called without a configured gnn");
}

}  // namespace saturn::vec
