#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "saturn/engine/engine.hpp"
#include "saturn/engine/episode.hpp"
#include "saturn/fol/canonical.hpp"
#include "saturn/fol/unify.hpp"
#include "test_util.hpp"

using namespace saturn;
using namespace saturn::engine;
using saturn::testing::problem_of;

namespace {

std::string text(const ProofState& s, ClauseId id) { return fol::formula_string(s.clause(id), s.symbols()); }

std::set<std::string> texts(const ProofState& s, const std::vector<ClauseId>& ids) {
  std::set<std::string> out;
  for (ClauseId id : ids) out.insert(text(s, id));
  return out;
}

std::size_t index_of(const ProofState& s, const std::string& clause, InferenceRule r) {
  const auto& acts = s.actions();
  for (std::size_t i = 0; i < acts.size(); ++i)
    if (acts[i].rule == r && text(s, acts[i].clause) == clause) return i;
  throw std::runtime_error("no action for " + clause);
}

}  // namespace

TEST(Init, ActionCount) {
  auto p = problem_of("a: p(a)\na: ~p(X) | q(X)\nc: ~q(a)");
  ProofState s = init(p);
  EXPECT_EQ(s.actions().size(), 6u);
  EXPECT_TRUE(s.processed().empty());
  EXPECT_EQ(s.status(), Status::Running);
  // rule-major: all resolution actions first
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.actions()[i].rule, InferenceRule::BinaryResolution);
  for (std::size_t i = 3; i < 6; ++i) EXPECT_EQ(s.actions()[i].rule, InferenceRule::Factoring);
}

TEST(Init, EmptyInputClauseIsRefuted) {
  auto p = problem_of("a: p\nc: $false");
  EXPECT_EQ(init(p).status(), Status::Refuted);
}

TEST(Init, NoConjectureIsError) {
  auto p = problem_of("a: p");
  EXPECT_THROW(init(p), std::invalid_argument);
}

TEST(Execute, ResolutionWithProcessedUnit) {
  auto p = problem_of("a: p(a)\na: ~p(X) | q(X)\nc: ~q(b)");
  ProofState s = init(p);
  execute(s, index_of(s, "p(a)", InferenceRule::BinaryResolution));
  auto derived = execute(s, index_of(s, text(s, 1), InferenceRule::BinaryResolution));
  EXPECT_TRUE(texts(s, derived).contains("q(a)"));
}

TEST(Execute, Factoring) {
  auto p = problem_of("a: p(X) | p(a)\nc: ~q");
  ProofState s = init(p);
  auto derived = execute(s, Action{0, InferenceRule::Factoring});
  ASSERT_EQ(derived.size(), 1u);
  EXPECT_EQ(text(s, derived[0]), "p(a)");
  EXPECT_EQ(s.clause(derived[0]).age, 1u);
}

TEST(Execute, UnitConflict) {
  auto p = problem_of("a: p(a)\nc: ~p(a)");
  ProofState s = init(p);
  execute(s, 0);
  EXPECT_EQ(s.status(), Status::Running);
  auto derived = execute(s, 0);
  ASSERT_EQ(derived.size(), 1u);
  EXPECT_TRUE(s.clause(derived[0]).empty());
  EXPECT_EQ(s.status(), Status::Refuted);
  EXPECT_THROW(execute(s, 0), std::logic_error);
}

TEST(Execute, UnavailableAction) {
  auto p = problem_of("a: p(a)\nc: ~p(a)");
  ProofState s = init(p);
  EXPECT_THROW(execute(s, 4), std::out_of_range);
  execute(s, 0);
  EXPECT_THROW(execute(s, Action{0, InferenceRule::BinaryResolution}), std::out_of_range);
}

TEST(Execute, StateEquationsHoldVerbatim) {
  auto p = problem_of(
      "a: p(a) | p(b)\na: ~p(X) | q(X)\na: ~q(X) | r(X) | r(X)\na: ~r(a)\nc: ~r(b) | ~q(Y)");
  ProofState s = init(p);
  std::mt19937 rng(1);
  for (int step = 0; step < 25 && s.status() == Status::Running; ++step) {
    const auto before_actions = s.actions();
    const auto before_processed = s.processed();
    const std::size_t k = rng() % before_actions.size();
    const Action a = before_actions[k];
    auto derived = execute(s, k);

    std::set<ClauseId> c_expected(before_processed.begin(), before_processed.end());
    c_expected.insert(a.clause);
    std::set<ClauseId> c_actual(s.processed().begin(), s.processed().end());
    EXPECT_EQ(c_actual, c_expected);

    std::multiset<std::pair<ClauseId, int>> a_expected, a_actual;
    for (std::size_t i = 0; i < before_actions.size(); ++i)
      if (i != k) a_expected.insert({before_actions[i].clause, int(before_actions[i].rule)});
    for (ClauseId d : derived)
      for (auto r : fol::kRules) a_expected.insert({d, int(r)});
    for (const auto& x : s.actions()) a_actual.insert({x.clause, int(x.rule)});
    EXPECT_EQ(a_actual, a_expected);

    for (ClauseId d : derived) {
      const auto& c = s.clause(d);
      EXPECT_EQ(c.age, s.step());
      bool sos = false;
      for (const auto& par : c.parents) {
        EXPECT_LT(s.clause(par.clause).age, c.age);
        sos = sos || s.clause(par.clause).sos;
      }
      EXPECT_EQ(c.sos, sos);
    }
  }
}

TEST(Generate, ResolutionPairs) {
  auto p = problem_of("a: p | q\na: ~p | r\nc: ~s");
  ProofState s = init(p);
  fol::FreshVars fresh(100);
  std::vector<ClausePtr> processed = {s.clause_ptr(1)};
  auto out = generate_inferences(InferenceRule::BinaryResolution, s.clause(0), processed, fresh, s.symbols());
  ASSERT_EQ(out.size(), 1u);
  const auto f = fol::formula_string(out[0], s.symbols());
  EXPECT_TRUE(f == "q | r" || f == "r | q") << f;
}

TEST(Generate, FactorsUpToRenaming) {
  auto p = problem_of("a: p(X) | p(Y)\nc: ~q");
  ProofState s = init(p);
  fol::FreshVars fresh(100);
  auto out = generate_inferences(InferenceRule::Factoring, s.clause(0), {}, fresh, s.symbols());
  ASSERT_EQ(out.size(), 1u);
  auto expect = problem_of("a: p(Z)");
  EXPECT_TRUE(fol::is_variant(out[0], expect.axioms[0]));
}

TEST(Generate, ExhaustivePairingCount) {
  auto p = problem_of("a: p(X) | s\na: ~p(a) | t\na: ~p(b) | u\na: ~p(f(Y)) | w\nc: ~v");
  ProofState s = init(p);
  fol::FreshVars fresh(100);
  std::vector<ClausePtr> processed = {s.clause_ptr(1), s.clause_ptr(2), s.clause_ptr(3)};
  auto out = generate_inferences(InferenceRule::BinaryResolution, s.clause(0), processed, fresh, s.symbols());
  // Oracle: one resolvent per complementary, unifiable pair.
  std::size_t expected = 0;
  for (const auto& c : processed)
    for (const auto& l : c->literals)
      for (const auto& g : s.clause(0).literals)
        if (l.positive != g.positive && l.predicate == g.predicate && fol::unify_atoms(l, g)) ++expected;
  EXPECT_EQ(expected, 3u);
  EXPECT_EQ(out.size(), 3u);
}

TEST(Generate, SelfResolution) {
  auto p = problem_of("a: ~p(X) | p(f(X))\nc: ~q");
  ProofState s = init(p);
  fol::FreshVars fresh(100);
  auto out = generate_inferences(InferenceRule::BinaryResolution, s.clause(0), {}, fresh, s.symbols());
  auto expect = problem_of("a: ~p(X) | p(f(f(X)))");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(fol::is_variant(out[0], expect.axioms[0]));
}

TEST(Proof, TwoStepRefutation) {
  auto p = problem_of("a: p\na: ~p | q\nc: ~q");
  FifoGuidance fifo;
  auto trace = run_episode(p, fifo, Limits{});
  ASSERT_TRUE(trace.solved());
  const auto& proof = *trace.proof;
  const auto& s = *trace.final_state;
  // Oracle: walk parents from the empty clause.
  std::set<ClauseId> closure;
  std::vector<ClauseId> stack{*s.empty_clause()};
  while (!stack.empty()) {
    ClauseId c = stack.back();
    stack.pop_back();
    if (!closure.insert(c).second) continue;
    for (const auto& par : s.clause(c).parents) stack.push_back(par.clause);
  }
  EXPECT_EQ(std::set<ClauseId>(proof.closure.begin(), proof.closure.end()), closure);
  std::size_t resolution_steps = 0;
  for (const auto& st : proof.steps) {
    EXPECT_EQ(st.action.rule, InferenceRule::BinaryResolution);
    ++resolution_steps;
  }
  EXPECT_EQ(resolution_steps, 2u);
  EXPECT_TRUE(std::binary_search(proof.closure.begin(), proof.closure.end(), proof.empty_clause));
}

TEST(Proof, RefutedAtStart) {
  auto p = problem_of("a: p\nc: $false");
  ProofState s = init(p);
  auto proof = extract_proof(s);
  EXPECT_TRUE(proof.steps.empty());
  EXPECT_EQ(proof.total_steps, 0u);
}

TEST(Proof, NotRefutedIsError) {
  auto p = problem_of("a: p\nc: ~q");
  EXPECT_THROW(extract_proof(init(p)), std::logic_error);
}

TEST(Proof, UnusedDecoyExcluded) {
  auto p = problem_of("a: d(a)\na: ~d(X) | e(X)\na: p\nc: ~p");
  ProofState s = init(p);
  execute(s, index_of(s, "d(a)", InferenceRule::BinaryResolution));
  execute(s, index_of(s, text(s, 1), InferenceRule::BinaryResolution));  // derives e(a), unused
  const std::uint32_t decoy_step = 1;
  execute(s, index_of(s, "p", InferenceRule::BinaryResolution));
  execute(s, index_of(s, "~p", InferenceRule::BinaryResolution));
  ASSERT_EQ(s.status(), Status::Refuted);
  auto proof = extract_proof(s);
  EXPECT_FALSE(proof.contains_step(decoy_step));
  EXPECT_TRUE(proof.contains_step(3));
  EXPECT_EQ(proof.steps.size(), 1u);
}

TEST(Episode, FifoOnUnitPair) {
  auto p = problem_of("a: p\nc: ~p");
  // Oracle: with an empty processed set the first step cannot resolve, so
  // any policy needs exactly two steps; FIFO takes the first two actions.
  FifoGuidance fifo;
  auto trace = run_episode(p, fifo, Limits{});
  EXPECT_TRUE(trace.solved());
  EXPECT_EQ(trace.steps.size(), 2u);
  EXPECT_EQ(trace.proof->total_steps, 2u);
}

TEST(Episode, ZeroStepLimit) {
  auto p = problem_of("a: p\nc: ~p");
  FifoGuidance fifo;
  auto trace = run_episode(p, fifo, Limits{0, 100.0});
  EXPECT_EQ(trace.status, Status::Limit);
  EXPECT_TRUE(trace.steps.empty());
}

TEST(Episode, Saturates) {
  auto p = problem_of("a: p(a)\nc: ~q(a)");
  FifoGuidance fifo;
  auto trace = run_episode(p, fifo, Limits{});
  EXPECT_EQ(trace.status, Status::Saturated);
  EXPECT_FALSE(trace.proof.has_value());
  EXPECT_EQ(trace.steps.size(), 4u);
}

namespace {

class Throwing final : public Guidance {
 public:
  Decision choose(const ProofState&) override { throw std::runtime_error("boom"); }
};

class OutOfRange final : public Guidance {
 public:
  Decision choose(const ProofState& s) override { return {s.actions().size(), {}}; }
};

}  // namespace

TEST(Episode, PolicyFailureEndsWithLimit) {
  auto p = problem_of("a: p\nc: ~p");
  Throwing t;
  auto trace = run_episode(p, t, Limits{});
  EXPECT_EQ(trace.status, Status::Limit);
  EXPECT_TRUE(trace.policy_failed);
  OutOfRange o;
  auto trace2 = run_episode(p, o, Limits{});
  EXPECT_EQ(trace2.status, Status::Limit);
  EXPECT_TRUE(trace2.policy_failed);
}

TEST(Episode, ReplayMatchesLiveActions) {
  auto p = problem_of("a: p(a) | p(b)\na: ~p(X) | q(X)\na: ~q(a)\nc: ~q(b)");
  RandomGuidance g(11);
  // Record live action lists through a wrapper.
  struct Recorder final : Guidance {
    Guidance& inner;
    std::vector<std::vector<Action>> seen;
    explicit Recorder(Guidance& i) : inner(i) {}
    Decision choose(const ProofState& s) override {
      seen.push_back(s.actions());
      return inner.choose(s);
    }
  } rec(g);
  auto trace = run_episode(p, rec, Limits{50, 100.0});
  std::vector<std::uint32_t> steps(trace.steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = static_cast<std::uint32_t>(i);
  auto replayed = replay_actions(*trace.final_state, steps);
  ASSERT_EQ(replayed.size(), rec.seen.size());
  for (std::size_t i = 0; i < replayed.size(); ++i) EXPECT_EQ(replayed[i], rec.seen[i]);
}

namespace {

// Ground clause as a set of signed atom strings.
using GroundClause = std::set<std::pair<bool, std::string>>;

GroundClause ground_of(const fol::Clause& c, const fol::SymbolTable& st) {
  GroundClause g;
  for (const auto& l : c.literals) {
    fol::Literal atom = l;
    atom.positive = true;
    g.insert({l.positive, fol::to_string(atom, st)});
  }
  return g;
}

bool holds(const GroundClause& c, const std::map<std::string, bool>& v) {
  for (const auto& [pos, atom] : c)
    if (v.at(atom) == pos) return true;
  return false;
}

}  // namespace

TEST(Soundness, GroundTruthTable) {
  std::mt19937 rng(5);
  const std::vector<std::string> atoms = {"p(a)", "p(b)", "q(a)", "q(b)", "r"};
  int checked = 0;
  for (int problem = 0; problem < 30; ++problem) {
    std::string lines;
    const int n = 4 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      lines += (i + 1 == n ? "c: " : "a: ");
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < k; ++j) {
        if (j) lines += " | ";
        if (rng() % 2) lines += "~";
        lines += atoms[rng() % atoms.size()];
      }
      lines += "\n";
    }
    auto p = problem_of(lines);
    RandomGuidance g(problem);
    auto trace = run_episode(p, g, Limits{40, 100.0});
    const auto& s = *trace.final_state;
    for (ClauseId id = static_cast<ClauseId>(s.num_inputs()); id < s.clauses().size(); ++id) {
      const auto& c = s.clause(id);
      std::vector<GroundClause> parents;
      for (const auto& par : c.parents) parents.push_back(ground_of(s.clause(par.clause), s.symbols()));
      const GroundClause derived = ground_of(c, s.symbols());
      for (unsigned mask = 0; mask < (1u << atoms.size()); ++mask) {
        std::map<std::string, bool> v;
        for (std::size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = (mask >> i) & 1u;
        const bool premises = std::all_of(parents.begin(), parents.end(),
                                          [&](const GroundClause& pc) { return holds(pc, v); });
        if (premises) ASSERT_TRUE(holds(derived, v)) << "unsound derivation " << text(s, id);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Options, DerivedCapTruncates) {
  auto p = problem_of("a: p(a)\na: p(b)\na: p(c)\na: p(d)\nc: ~p(X) | q(X)");
  EngineOptions opt;
  opt.max_derived_per_step = 2;
  ProofState s = init(p, opt);
  for (int i = 0; i < 4; ++i) execute(s, 0);
  auto derived = execute(s, 0);
  EXPECT_EQ(derived.size(), 2u);
  EXPECT_TRUE(s.truncated());
  EXPECT_TRUE(s.history().back().truncated);
}

TEST(Options, SubsumptionDropsInstances) {
  auto p = problem_of("a: q(X)\na: p(a)\nc: ~p(Y) | q(Y)");
  EngineOptions opt;
  opt.subsumption = true;
  ProofState s = init(p, opt);
  execute(s, 0);
  execute(s, 0);
  auto derived = execute(s, 0);
  EXPECT_TRUE(derived.empty());
  ProofState plain = init(p);
  execute(plain, 0);
  execute(plain, 0);
  EXPECT_EQ(execute(plain, 0).size(), 1u);
}
