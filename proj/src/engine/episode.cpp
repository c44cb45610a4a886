#include "saturn/engine/episode.hpp"

#include <chrono>
#include <stdexcept>
#include <tuple>

namespace saturn::engine {

Decision FifoGuidance::choose(const ProofState& state) {
  if (state.actions().empty()) throw std::logic_error("no actions");
  return Decision{0, {}};
}

Decision RandomGuidance::choose(const ProofState& state) {
  const auto n = state.actions().size();
  if (n == 0) throw std::logic_error("no actions");
  Decision d;
  d.index = static_cast<std::size_t>(uniform_index(rng_, n));
  d.distribution.assign(n, 1.0 / static_cast<double>(n));
  return d;
}

Decision AgeWeightGuidance::choose(const ProofState& state) {
  const auto& acts = state.actions();
  if (acts.empty()) throw std::logic_error("no actions");
  if (age_every_ > 0 && (state.step() + 1) % age_every_ == 0) return Decision{0, {}};
  std::size_t best = 0;
  auto key = [&](const Action& a) {
    const auto& c = state.clause(a.clause);
    return std::make_tuple(a.rule != InferenceRule::BinaryResolution, fol::clause_weight(c), c.age, c.id);
  };
  auto best_key = key(acts[0]);
  for (std::size_t i = 1; i < acts.size(); ++i) {
    auto k = key(acts[i]);
    if (k < best_key) {
      best_key = k;
      best = i;
    }
  }
  return Decision{best, {}};
}

EpisodeTrace run_episode(const fol::Problem& p, Guidance& policy, const Limits& limits,
                         const EngineOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  auto state = std::make_shared<ProofState>(init(p, options));
  EpisodeTrace trace;
  trace.problem = p.name;

  if (state->status() == Status::Running) {
    try {
      policy.begin(*state);
    } catch (const std::exception& e) {
      trace.policy_failed = true;
      trace.failure = e.what();
      state->stop_at_limit();
    }
  }

  while (state->status() == Status::Running) {
    if (state->step() >= limits.max_steps || elapsed() >= limits.max_seconds) {
      state->stop_at_limit();
      break;
    }
    Decision d;
    try {
      d = policy.choose(*state);
      if (d.index >= state->actions().size()) throw std::out_of_range("policy chose an unavailable action");
    } catch (const std::exception& e) {
      trace.policy_failed = true;
      trace.failure = e.what();
      state->stop_at_limit();
      break;
    }
    TraceStep ts;
    ts.step = state->step();
    ts.action_index = d.index;
    ts.action = state->actions()[d.index];
    ts.num_actions = state->actions().size();
    ts.num_processed = state->processed().size();
    ts.distribution = std::move(d.distribution);
    ts.derived = execute(*state, d.index);
    trace.steps.push_back(std::move(ts));
  }

  trace.status = state->status();
  trace.truncated = state->truncated();
  trace.seconds = elapsed();
  if (trace.status == Status::Refuted) {
    trace.proof = extract_proof(*state);
    trace.proof->seconds = trace.seconds;
  }
  trace.final_state = std::move(state);
  return trace;
}

std::vector<std::vector<Action>> replay_actions(const ProofState& final_state,
                                                const std::vector<std::uint32_t>& steps) {
  std::vector<std::vector<Action>> out;
  out.reserve(steps.size());
  std::vector<Action> acts;
  for (InferenceRule r : fol::kRules) {
    for (ClauseId id = 0; id < final_state.num_inputs(); ++id) acts.push_back(Action{id, r});
  }
  std::size_t next = 0;
  const auto& hist = final_state.history();
  for (std::uint32_t t = 0; next < steps.size(); ++t) {
    while (next < steps.size() && steps[next] == t) {
      out.push_back(acts);
      ++next;
    }
    if (next == steps.size()) break;
    if (t >= hist.size()) throw std::out_of_range("replay step beyond history");
    const auto& rec = hist[t];
    acts.erase(acts.begin() + static_cast<std::ptrdiff_t>(rec.action_index));
    for (InferenceRule r : fol::kRules) {
      for (ClauseId id : rec.derived) acts.push_back(Action{id, r});
    }
  }
  return out;
}

}  // namespace saturn::engine
