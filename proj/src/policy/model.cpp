#include "saturn/policy/model.hpp"

#include <cmath>
#include <stdexcept>

#include "saturn/vec/gnn.hpp"

namespace saturn::policy {

std::vector<std::string> PolicyConfig::validate() const {
  std::vector<std::string> errors;
  if (d == 0) errors.emplace_back("policy.d must be positive");
  if (layers == 0) errors.emplace_back("policy.layers must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) errors.emplace_back("policy.dropout must be in [0, 1)");
  return errors;
}

namespace {

std::string enc_name(const char* kind, std::size_t i) { return "enc." + std::string(kind) + std::to_string(i); }

}  // namespace

std::vector<std::string> expected_parameters(const vec::VectorizerConfig& vcfg, const PolicyConfig& pcfg) {
  ParamStore ps;
  Rng rng(0);
  vec::init_gnn_params(ps, vcfg, rng);
  std::vector<std::string> names;
  for (const auto& [name, _] : ps.entries()) names.push_back(name);
  for (std::size_t i = 0; i < pcfg.layers; ++i) {
    names.push_back(enc_name("W", i));
    names.push_back(enc_name("b", i));
  }
  for (const char* n : {"comb.W1", "comb.b1", "comb.W2", "comb.b2", "attn.Wa"}) names.emplace_back(n);
  return names;
}

Policy make_policy(const vec::VectorizerConfig& vcfg, const PolicyConfig& pcfg, std::uint64_t seed) {
  std::vector<std::string> errors = vcfg.validate();
  for (auto& e : pcfg.validate()) errors.push_back(std::move(e));
  if (!errors.empty()) throw std::invalid_argument(errors.front());

  Policy p{vcfg, pcfg, {}};
  Rng rng(seed);
  vec::init_gnn_params(p.params, vcfg, rng);
  const Index w = pcfg.width();
  auto in = static_cast<Index>(vcfg.length());
  for (std::size_t i = 0; i < pcfg.layers; ++i) {
    p.params.add(enc_name("W", i), nn::init_fan_in(w, in, rng));
    p.params.add(enc_name("b", i), Matrix::Zero(w, 1));
    in = w;
  }
  p.params.add("comb.W1", nn::init_fan_in(w, 2 * w, rng));
  p.params.add("comb.b1", Matrix::Zero(w, 1));
  p.params.add("comb.W2", nn::init_fan_in(w, w, rng));
  p.params.add("comb.b2", Matrix::Zero(w, 1));
  p.params.add("attn.Wa", nn::init_fan_in(w + static_cast<Index>(fol::kNumRules), w, rng));
  return p;
}

namespace {

Var finish_encoder(Tape& t, Policy& p, Var h, bool training, Rng* rng) {
  for (std::size_t i = 1; i < p.cfg.layers; ++i)
    h = nn::linear(nn::relu(h), t.parameter(p.params.at(enc_name("W", i))), t.parameter(p.params.at(enc_name("b", i))));
  if (training && p.cfg.dropout > 0.0) {
    if (rng == nullptr) throw std::invalid_argument("dropout in training mode needs an rng");
    h = nn::dropout(h, p.cfg.dropout, true, *rng);
  }
  return h;
}

}  // namespace

Var encode(Tape& t, Policy& p, const Var& features, bool training, Rng* rng) {
  const Var h = nn::linear(features, t.parameter(p.params.at(enc_name("W", 0))), t.parameter(p.params.at(enc_name("b", 0))));
  return finish_encoder(t, p, h, training, rng);
}

Var encode_split(Tape& t, Policy& p, const nn::SparseMatrix& sparse, const Var* gnn, bool training, Rng* rng) {
  const Var w = t.parameter(p.params.at(enc_name("W", 0)));
  const auto ds = static_cast<Index>(p.vec.sparse_length());
  const auto dg = static_cast<Index>(p.vec.gnn_length());
  if (sparse.rows() != ds) throw nn::ShapeError("sparse block has the wrong row count");
  if ((dg > 0) != (gnn != nullptr)) throw std::invalid_argument("GNN columns must be given exactly when configured");
  Var h;
  if (ds > 0) h = nn::matmul_sparse(dg > 0 ? nn::column_block(w, 0, ds) : w, sparse);
  if (dg > 0) {
    if (gnn->cols() != sparse.cols()) throw nn::ShapeError("sparse and GNN blocks differ in column count");
    const Var g = nn::matmul(ds > 0 ? nn::column_block(w, ds, dg) : w, *gnn);
    h = h.valid() ? nn::add(h, g) : g;
  }
  h = nn::add_bias(h, t.parameter(p.params.at(enc_name("b", 0))));
  return finish_encoder(t, p, h, training, rng);
}

Var embed_conjecture(const Var& conj_embeddings) {
  if (conj_embeddings.cols() == 0) throw std::invalid_argument("empty conjecture set");
  return nn::mean_pool(conj_embeddings);
}

Var combine_processed(Tape& t, Policy& p, const Var& h, const Var& hc) {
  // W1 [h; h_c] = W1_h h + W1_c h_c, and the second term is shared by all columns.
  const Index w = p.cfg.width();
  const Var w1 = t.parameter(p.params.at("comb.W1"));
  const Var shared = nn::add(nn::matmul(nn::column_block(w1, w, w), hc), t.parameter(p.params.at("comb.b1")));
  const Var inner = nn::relu(nn::add_bias(nn::matmul(nn::column_block(w1, 0, w), h), shared));
  const Var f = nn::linear(inner, t.parameter(p.params.at("comb.W2")), t.parameter(p.params.at("comb.b2")));
  return nn::add(nn::add_bias(h, hc), f);
}

Var embed_actions(Tape& t, const Var& clause_embeddings, std::span<const fol::InferenceRule> rules) {
  if (static_cast<Index>(rules.size()) != clause_embeddings.cols())
    throw nn::ShapeError("one rule per action column expected");
  Matrix onehot = Matrix::Zero(static_cast<Index>(fol::kNumRules), clause_embeddings.cols());
  for (std::size_t j = 0; j < rules.size(); ++j) onehot(static_cast<Index>(rules[j]), static_cast<Index>(j)) = 1.0;
  return nn::concat({clause_embeddings, t.constant(std::move(onehot))});
}

Var score_actions(Tape& t, Policy& p, const Var& actions, const Var& processed) {
  const Var wa = t.parameter(p.params.at("attn.Wa"));
  // (A^T W_a) C costs M*(2d+|I|)*2d + M*2d*N; the other association is
  // slightly cheaper only when N is far larger than M.
  const Var h = nn::matmul(nn::matmul(nn::transpose(actions), wa), processed);
  return nn::max_pool_columns(h);
}

Var state_scores(Tape& t, Policy& p, const Var& embeddings, const StateIndex& s) {
  if (s.action_clauses.empty()) throw std::invalid_argument("state has no actions");
  const Var hc = embed_conjecture(nn::select_columns(embeddings, s.conjecture));
  const Var c = s.processed.empty() ? hc
                                    : combine_processed(t, p, nn::select_columns(embeddings, s.processed), hc);
  const Var a = embed_actions(t, nn::select_columns(embeddings, s.action_clauses), s.action_rules);
  return score_actions(t, p, a, c);
}

Selection select_action(const Vector& scores, std::uint32_t step, double tau, std::uint32_t tau0, Rng& rng,
                        bool sample) {
  if (scores.size() == 0) throw std::invalid_argument("no actions to select from");
  Selection s;
  s.distribution = nn::softmax(scores, tau);
  if (sample && step < tau0) {
    const double u = uniform01(rng);
    double acc = 0.0;
    s.index = static_cast<std::size_t>(scores.size() - 1);
    for (Index i = 0; i < scores.size(); ++i) {
      acc += s.distribution(i);
      if (u < acc) {
        s.index = static_cast<std::size_t>(i);
        break;
      }
    }
    // Rounding can leave the tail with zero mass; never return such an entry.
    while (s.index > 0 && s.distribution(static_cast<Index>(s.index)) == 0.0) --s.index;
  } else {
    s.index = static_cast<std::size_t>(nn::argmax(scores));
  }
  return s;
}

double entropy(const Vector& distribution) {
  double h = 0.0;
  for (Index i = 0; i < distribution.size(); ++i) {
    const double q = distribution(i);
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

}  // namespace saturn::policy
