#pragma once

// Node-at-a-time reference implementations of the graph networks, written
// from the layer equations without the batched tape code.

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "saturn/fol/dag.hpp"
#include "saturn/vec/gnn.hpp"

namespace saturn::testing::reference {

using nn::Matrix;
using nn::Vector;
using vec::VectorizerConfig;
using vec::embedding_column;

inline Matrix h0_of(const fol::FormulaDag& g, const nn::ParamStore& ps, const VectorizerConfig& cfg) {
  const Matrix& e = ps.at("gnn.embed").value;
  Matrix h(static_cast<nn::Index>(cfg.d), static_cast<nn::Index>(g.size()));
  for (std::size_t u = 0; u < g.size(); ++u) h.col(static_cast<nn::Index>(u)) = e.col(embedding_column(g.nodes[u], cfg.vocab));
  return h;
}

inline std::vector<std::set<std::uint32_t>> neighbor_sets(const fol::FormulaDag& g) {
  std::vector<std::set<std::uint32_t>> n(g.size());
  for (const auto& e : g.edges) {
    n[e.parent].insert(e.child);
    n[e.child].insert(e.parent);
  }
  return n;
}

inline Vector naive_gcn(const fol::FormulaDag& g, const nn::ParamStore& ps, const VectorizerConfig& cfg) {
  Matrix h = h0_of(g, ps, cfg);
  const auto nb = neighbor_sets(g);
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    const Matrix& w = ps.at("gcn.W" + std::to_string(i)).value;
    Matrix next(h.rows(), h.cols());
    for (std::size_t u = 0; u < g.size(); ++u) {
      const double nu = static_cast<double>(nb[u].size());
      Vector acc = h.col(static_cast<nn::Index>(u)) / (nu == 0 ? 1.0 : nu);
      for (auto v : nb[u]) acc += h.col(v) / std::sqrt(nu * static_cast<double>(nb[v].size()));
      next.col(static_cast<nn::Index>(u)) = (w * acc).cwiseMax(0.0);
    }
    h = next;
  }
  return h.rowwise().mean();
}

inline Vector naive_sage(const fol::FormulaDag& g, const nn::ParamStore& ps, const VectorizerConfig& cfg) {
  Matrix h = h0_of(g, ps, cfg);
  const auto nb = neighbor_sets(g);
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    const Matrix& wa = ps.at("sage.WA" + std::to_string(i)).value;
    const Matrix& w = ps.at("sage.W" + std::to_string(i)).value;
    Matrix next(h.rows(), h.cols());
    for (std::size_t u = 0; u < g.size(); ++u) {
      Vector mean = h.col(static_cast<nn::Index>(u));
      for (auto v : nb[u]) mean += h.col(v);
      mean /= static_cast<double>(nb[u].size() + 1);
      Vector hat = (wa * mean).cwiseMax(0.0);
      Vector cat(2 * h.rows());
      cat << h.col(static_cast<nn::Index>(u)), hat;
      next.col(static_cast<nn::Index>(u)) = (w * cat).cwiseMax(0.0);
    }
    h = next;
  }
  return h.rowwise().mean();
}

inline Vector ln_ref(const Vector& x, const Vector& gain, const Vector& bias) {
  const double mu = x.mean();
  const double var = (x.array() - mu).square().mean();
  return ((x.array() - mu) / std::sqrt(var + 1e-5) * gain.array() + bias.array()).matrix();
}

// One node at a time, in recursion order, with memoisation.
inline Matrix sequential_direction(const fol::FormulaDag& g, const Matrix& prev, const nn::ParamStore& ps,
                            const std::string& prefix, bool down) {
  const std::size_t n = g.size();
  std::vector<std::map<std::uint8_t, std::set<std::uint32_t>>> in(n);
  for (const auto& e : g.edges) {
    if (down) in[e.child][e.type].insert(e.parent);
    else in[e.parent][e.type].insert(e.child);
  }
  Matrix out(prev.rows(), prev.cols());
  std::vector<bool> ready(n, false);
  std::function<void(std::uint32_t)> visit = [&](std::uint32_t u) {
    if (ready[u]) return;
    Vector pre = ps.at(prefix + ".W").value * prev.col(u);
    for (const auto& [r, nbrs] : in[u]) {
      const Matrix& wr = ps.at(prefix + ".R" + std::to_string(r)).value;
      for (auto v : nbrs) {
        visit(v);
        pre += wr * out.col(v) / static_cast<double>(nbrs.size());
      }
    }
    Vector hat = ln_ref(pre, ps.at(prefix + ".ln_gain").value.col(0), ps.at(prefix + ".ln_bias").value.col(0))
                     .array()
                     .tanh()
                     .matrix();
    out.col(u) = hat + prev.col(u);
    ready[u] = true;
  };
  for (std::uint32_t u = 0; u < n; ++u) visit(u);
  return out;
}

inline Matrix sequential_staged_nodes(const fol::FormulaDag& g, const nn::ParamStore& ps, const VectorizerConfig& cfg) {
  Matrix h = h0_of(g, ps, cfg);
  for (std::size_t i = 0; i < cfg.rounds; ++i) {
    const auto s = std::to_string(i);
    Matrix up = sequential_direction(g, h, ps, "staged.up" + s, false);
    Matrix dn = sequential_direction(g, h, ps, "staged.down" + s, true);
    Matrix next(h.rows(), h.cols());
    for (nn::Index u = 0; u < h.cols(); ++u) {
      Vector cat(2 * h.rows());
      cat << up.col(u), dn.col(u);
      Vector hid = (ps.at("staged.bd" + s + ".W1").value * cat + ps.at("staged.bd" + s + ".b1").value.col(0)).cwiseMax(0.0);
      next.col(u) = 0.5 * (up.col(u) + dn.col(u)) + ps.at("staged.bd" + s + ".W2").value * hid +
                    ps.at("staged.bd" + s + ".b2").value.col(0);
    }
    h = next;
  }
  return h;
}

inline Vector sequential_staged(const fol::FormulaDag& g, const nn::ParamStore& ps, const VectorizerConfig& cfg) {
  Matrix h = sequential_staged_nodes(g, ps, cfg);
  Vector r = cfg.root_readout ? Vector(h.col(g.root)) : Vector(h.rowwise().mean());
  return ln_ref(ps.at("staged.out.W").value * r, ps.at("staged.out.ln_gain").value.col(0),
                ps.at("staged.out.ln_bias").value.col(0))
      .cwiseMax(0.0);
}

}  // namespace saturn::testing::reference
