#include "saturn/rl/loss.hpp"

#include <map>
#include <unordered_map>

#include "saturn/vec/vectorizer.hpp"

namespace saturn::rl {

namespace {

struct Group {
  const EpisodeRecord* episode;
  std::vector<const Experience*> members;
};

nn::SparseMatrix select_sparse(const nn::SparseMatrix& m, const std::vector<nn::Index>& cols) {
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (nn::SparseMatrix::InnerIterator it(m, cols[j]); it; ++it)
      entries.emplace_back(it.row(), static_cast<nn::Index>(j), it.value());
  nn::SparseMatrix out(m.rows(), static_cast<nn::Index>(cols.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

/// Scores for every member of a group. The clauses, the combined processed
/// embeddings and the projected actions are computed once for the union of
/// what the members need; each member then selects its own columns. The
/// result equals policy::state_scores member by member.
std::vector<nn::Var> group_scores(nn::Tape& t, policy::Policy& p, const Group& g, bool training, Rng* rng) {
  const EpisodeRecord& e = *g.episode;
  const std::size_t n = e.clauses.size();
  std::vector<nn::Index> column(n, -1);
  std::vector<nn::Index> processed_slot(n, -1);
  std::map<std::pair<fol::ClauseId, int>, nn::Index> action_slot;
  auto want = [&](fol::ClauseId id) {
    if (id >= n) throw std::out_of_range("experience refers to a clause outside its episode");
    column[id] = 0;
  };
  for (auto id : e.conjecture) want(id);
  for (const Experience* x : g.members) {
    for (auto id : x->processed) {
      want(id);
      processed_slot[id] = 0;
    }
    for (const auto& a : x->actions) {
      want(a.clause);
      action_slot.try_emplace({a.clause, static_cast<int>(a.rule)}, 0);
    }
  }
  std::vector<const fol::Clause*> clauses;
  std::vector<nn::Index> ids;
  for (std::size_t id = 0; id < n; ++id) {
    if (column[id] < 0) continue;
    column[id] = static_cast<nn::Index>(clauses.size());
    clauses.push_back(e.clauses[id].get());
    ids.push_back(static_cast<nn::Index>(id));
  }

  const nn::SparseMatrix sparse = select_sparse(e.sparse, ids);
  nn::Var gnn;
  if (p.vec.gnn != vec::GnnKind::None) gnn = vec::gnn_columns(t, clauses, *e.symbols, p.params, p.vec);
  const nn::Var h = policy::encode_split(t, p, sparse, gnn.valid() ? &gnn : nullptr, training, rng);

  std::vector<nn::Index> conj;
  for (auto id : e.conjecture) conj.push_back(column[id]);
  const nn::Var hc = policy::embed_conjecture(nn::select_columns(h, conj));

  std::vector<nn::Index> proc_cols;
  for (std::size_t id = 0; id < n; ++id) {
    if (processed_slot[id] < 0) continue;
    processed_slot[id] = static_cast<nn::Index>(proc_cols.size());
    proc_cols.push_back(column[id]);
  }
  nn::Var combined;
  if (!proc_cols.empty()) combined = policy::combine_processed(t, p, nn::select_columns(h, proc_cols), hc);

  // W_a^T a for every distinct action of the group.
  std::vector<nn::Index> act_cols;
  std::vector<fol::InferenceRule> act_rules;
  for (auto& [key, slot] : action_slot) {
    slot = static_cast<nn::Index>(act_cols.size());
    act_cols.push_back(column[key.first]);
    act_rules.push_back(static_cast<fol::InferenceRule>(key.second));
  }
  const nn::Var a = policy::embed_actions(t, nn::select_columns(h, act_cols), act_rules);
  const nn::Var wa = t.parameter(p.params.at("attn.Wa"));

  // A^T W_a C: push W_a through whichever side of the group is smaller.
  const bool project_actions = !combined.valid() || act_cols.size() <= proc_cols.size();
  nn::Var side;
  if (project_actions) {
    side = nn::transpose(nn::matmul(nn::transpose(wa), a));  // actions x 2d
  } else {
    side = nn::matmul(wa, combined);  // (2d+|I|) x processed
  }

  std::vector<nn::Var> out;
  for (const Experience* x : g.members) {
    if (x->actions.empty()) throw std::invalid_argument("experience has no actions");
    std::vector<nn::Index> sel;
    for (const auto& act : x->actions) sel.push_back(action_slot.at({act.clause, static_cast<int>(act.rule)}));
    std::vector<nn::Index> pc;
    for (auto id : x->processed) pc.push_back(processed_slot[id]);
    nn::Var s;
    if (project_actions) {
      const nn::Var c = pc.empty() ? hc : nn::select_columns(combined, pc);
      s = nn::matmul(nn::transpose(nn::select_columns(nn::transpose(side), sel)), c);
    } else {
      const nn::Var at = nn::transpose(nn::select_columns(a, sel));
      s = pc.empty() ? nn::matmul(at, nn::matmul(wa, hc)) : nn::matmul(at, nn::select_columns(side, pc));
    }
    out.push_back(nn::max_pool_columns(s));
  }
  return out;
}

std::vector<Group> group_by_episode(std::span<const Experience* const> batch) {
  std::vector<Group> groups;
  std::unordered_map<const EpisodeRecord*, std::size_t> slot;
  for (const Experience* x : batch) {
    auto [it, fresh] = slot.try_emplace(x->episode.get(), groups.size());
    if (fresh) groups.push_back({x->episode.get(), {}});
    groups[it->second].members.push_back(x);
  }
  return groups;
}

}  // namespace

LossParts compute_loss(nn::Tape& t, policy::Policy& p, std::span<const Experience* const> batch, double lambda,
                       bool training, Rng* rng) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const double inv = 1.0 / static_cast<double>(batch.size());
  std::vector<nn::Var> terms;
  LossParts parts;
  for (const Group& g : group_by_episode(batch)) {
    const auto scores = group_scores(t, p, g, training, rng);
    for (std::size_t k = 0; k < g.members.size(); ++k) {
      const Experience& x = *g.members[k];
      if (x.chosen >= x.actions.size()) throw std::out_of_range("chosen action out of range");
      const nn::Var logp = nn::log_softmax(scores[k], x.tau);
      const nn::Var h = nn::entropy_from_log(logp);
      parts.mean_entropy += h.value()(0, 0) * inv;
      terms.push_back(nn::scale(h, -lambda * inv));
      if (x.reward != 0.0) {
        const nn::Var lp = nn::pick(logp, static_cast<nn::Index>(x.chosen));
        parts.policy_term -= x.reward * lp.value()(0, 0) * inv;
        terms.push_back(nn::scale(lp, -x.reward * inv));
      }
    }
  }
  nn::Var total = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) total = nn::add(total, terms[i]);
  parts.loss = total;
  return parts;
}

nn::Vector experience_distribution(policy::Policy& p, const Experience& x) {
  nn::Tape t;
  const Experience* one[] = {&x};
  const auto scores = group_scores(t, p, group_by_episode(one)[0], false, nullptr);
  return nn::softmax(scores[0].value().col(0), x.tau);
}

}  // namespace saturn::rl
