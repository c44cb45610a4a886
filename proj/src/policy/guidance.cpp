#include "saturn/policy/guidance.hpp"

#include <limits>

#include "saturn/vec/sparse.hpp"
#include "saturn/vec/vectorizer.hpp"

namespace saturn::policy {

namespace {

std::uint64_t action_key(const engine::Action& a) {
  return (static_cast<std::uint64_t>(a.clause) << 8) | static_cast<std::uint64_t>(a.rule);
}

}  // namespace

NeuralGuidance::NeuralGuidance(Policy& policy, Options options)
    : policy_(policy), options_(options), rng_(options.seed) {}

void NeuralGuidance::begin(const engine::ProofState& state) {
  sparse_.clear();
  embeddings_.clear();
  combined_.clear();
  actions_.clear();
  rng_.seed(options_.seed);
  embed_new_clauses(state);
  if (state.conjecture().empty()) throw std::invalid_argument("state has no conjecture clauses");
  hc_ = Vector::Zero(policy_.cfg.width());
  for (engine::ClauseId id : state.conjecture()) hc_ += embeddings_[id];
  hc_ /= static_cast<double>(state.conjecture().size());
  const Index w = policy_.cfg.width();
  comb_shared_ = policy_.params.at("comb.W1").value.rightCols(w) * hc_ + policy_.params.at("comb.b1").value.col(0);
}

void NeuralGuidance::embed_new_clauses(const engine::ProofState& s) {
  const auto& vcfg = policy_.vec;
  for (std::size_t id = sparse_.size(); id < s.clauses().size(); ++id) {
    const fol::Clause& c = s.clause(static_cast<engine::ClauseId>(id));
    Vector sparse = vec::sparse_features(c, s.symbols(), vcfg);
    const Matrix& w0 = policy_.params.at("enc.W0").value;
    const auto ds = static_cast<Index>(vcfg.sparse_length());
    Vector x = policy_.params.at("enc.b0").value.col(0);
    for (Index k = 0; k < ds; ++k)
      if (sparse(k) != 0.0) x += sparse(k) * w0.col(k);
    if (vcfg.gnn != vec::GnnKind::None) {
      nn::Tape t;
      const fol::Clause* one[] = {&c};
      x += w0.rightCols(static_cast<Index>(vcfg.gnn_length())) *
           vec::gnn_columns(t, one, s.symbols(), policy_.params, vcfg).value().col(0);
    }
    for (std::size_t i = 1; i < policy_.cfg.layers; ++i) {
      const std::string idx = std::to_string(i);
      x = policy_.params.at("enc.W" + idx).value * x.cwiseMax(0.0) + policy_.params.at("enc.b" + idx).value.col(0);
    }
    sparse_.push_back(std::move(sparse));
    embeddings_.push_back(std::move(x));
    combined_.emplace_back();
  }
}

const Vector& NeuralGuidance::combined(engine::ClauseId id) {
  Vector& out = combined_[id];
  if (out.size() == 0) {
    const Vector& h = embeddings_[id];
    const Index w = policy_.cfg.width();
    const Vector inner = (policy_.params.at("comb.W1").value.leftCols(w) * h + comb_shared_).cwiseMax(0.0);
    const Vector f = policy_.params.at("comb.W2").value * inner + policy_.params.at("comb.b2").value.col(0);
    out = (h + hc_) + f;
  }
  return out;
}

Vector NeuralGuidance::scores(const engine::ProofState& s) {
  embed_new_clauses(s);
  const Matrix& wa = policy_.params.at("attn.Wa").value;
  const Index w = policy_.cfg.width();
  const auto& processed = s.processed();
  Vector out(static_cast<Index>(s.actions().size()));
  for (std::size_t i = 0; i < s.actions().size(); ++i) {
    const engine::Action& a = s.actions()[i];
    auto [it, fresh] = actions_.try_emplace(action_key(a));
    ActionCache& cache = it->second;
    if (fresh) {
      cache.projected = wa.topRows(w).transpose() * embeddings_[a.clause] +
                        wa.row(w + static_cast<Index>(a.rule)).transpose();
      cache.best = -std::numeric_limits<double>::infinity();
    }
    if (processed.empty()) {
      out(static_cast<Index>(i)) = cache.projected.dot(hc_);
      continue;
    }
    for (; cache.seen < processed.size(); ++cache.seen)
      cache.best = std::max(cache.best, cache.projected.dot(combined(processed[cache.seen])));
    out(static_cast<Index>(i)) = cache.best;
  }
  return out;
}

engine::Decision NeuralGuidance::choose(const engine::ProofState& state) {
  const Vector p = scores(state);
  Selection sel = select_action(p, state.step(), options_.tau, options_.tau0, rng_, options_.sample);
  actions_.erase(action_key(state.actions()[sel.index]));
  engine::Decision d;
  d.index = sel.index;
  d.distribution.assign(sel.distribution.data(), sel.distribution.data() + sel.distribution.size());
  return d;
}

}  // namespace saturn::policy
