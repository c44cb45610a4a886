#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "saturn/fol/dag.hpp"
#include "saturn/nn/grad_check.hpp"
#include "saturn/vec/gnn.hpp"
#include "saturn/vec/hashing.hpp"
#include "saturn/vec/schedule.hpp"
#include "saturn/vec/sparse.hpp"
#include "saturn/vec/vectorizer.hpp"
#include "gnn_reference.hpp"
#include "test_util.hpp"

using namespace saturn;
using namespace saturn::vec;
using saturn::testing::problem_of;
using namespace saturn::testing::reference;
using nn::Matrix;
using nn::Vector;

namespace {

fol::Problem one(const std::string& clause) { return problem_of("a: " + clause); }

}  // namespace

TEST(Simple, AxiomFeatures) {
  auto p = one("p(a)");
  Vector v = simple_features(p.axioms[0], 5);
  EXPECT_EQ(v, (Vector(8) << 1, 0, 0, 0, 0, 2, 1, 0).finished());
}

TEST(Simple, ConjectureSosAndAgeCap) {
  auto p = problem_of("c: ~p(a) | q");
  Vector v = simple_features(p.negated_conjecture[0], 5);
  EXPECT_EQ(v(7), 1.0);
  fol::Clause old = p.negated_conjecture[0];
  old.age = 1000000;
  Vector w = simple_features(old, 100);
  EXPECT_EQ(w(99), 1.0);
  EXPECT_EQ(w.head(100).sum(), 1.0);
}

TEST(Chain, Examples) {
  auto p = problem_of("a: p(a)\na: ~p(X)");
  auto c1 = chain_patterns(p.axioms[0], *p.symbols);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1.begin()->first, (Pattern{true, "p(a)"}));
  EXPECT_EQ(c1.begin()->second, 1u);
  auto c2 = chain_patterns(p.axioms[1], *p.symbols);
  ASSERT_EQ(c2.size(), 1u);
  EXPECT_EQ(c2.begin()->first, (Pattern{false, "p(*)"}));
}

TEST(Chain, PathOracle) {
  auto p = one("q(f(g(X,Y),Z), g(X,Y))");
  auto pats = chain_patterns(p.axioms[0], *p.symbols);
  // Oracle: one path per leaf occurrence of the parse tree.
  std::function<std::size_t(const fol::TermPtr&)> leaves = [&](const fol::TermPtr& t) -> std::size_t {
    if (t->args().empty()) return 1;
    std::size_t n = 0;
    for (const auto& a : t->args()) n += leaves(a);
    return n;
  };
  std::size_t expected = 0;
  for (const auto& a : p.axioms[0].literals[0].args) expected += leaves(a);
  std::size_t total = 0;
  for (const auto& [_, n] : pats) total += n;
  EXPECT_EQ(total, expected);
  EXPECT_EQ(total, 5u);
  EXPECT_TRUE(pats.contains(Pattern{true, "q(f(g(*,_),_),_)"}));
  EXPECT_TRUE(pats.contains(Pattern{true, "q(f(g(_,*),_),_)"}));
  EXPECT_TRUE(pats.contains(Pattern{true, "q(f(_,*),_)"}));
  EXPECT_TRUE(pats.contains(Pattern{true, "q(_,g(*,_))"}));
  EXPECT_TRUE(pats.contains(Pattern{true, "q(_,g(_,*))"}));
}

TEST(Chain, Vectorize) {
  EXPECT_EQ(chain_vectorize({}, 8), Vector::Zero(16));
  Vector v = chain_vectorize({{Pattern{true, "p(a)"}, 3}}, 8);
  EXPECT_EQ((v.array() != 0).count(), 1);
  EXPECT_EQ(v.head(8).sum(), 3.0);
  Vector c = chain_vectorize({{Pattern{true, "p(a)"}, 2}, {Pattern{true, "q(*)"}, 5}}, 1);
  EXPECT_EQ(c, (Vector(2) << 7, 0).finished());
}

TEST(Chain, Halves) {
  auto p = problem_of("a: p(X) | q(f(a))\na: ~p(X) | ~r(b, Y)");
  Vector pos = chain_vectorize(chain_patterns(p.axioms[0], *p.symbols), 16);
  Vector neg = chain_vectorize(chain_patterns(p.axioms[1], *p.symbols), 16);
  EXPECT_EQ(pos.tail(16), Vector::Zero(16));
  EXPECT_GT(pos.head(16).sum(), 0);
  EXPECT_EQ(neg.head(16), Vector::Zero(16));
  EXPECT_GT(neg.tail(16).sum(), 0);
}

TEST(Walks, UnitExamples) {
  auto p = one("p(a)");
  auto w1 = term_walk_strings(p.axioms[0], 1, *p.symbols);
  EXPECT_EQ(w1, (std::map<std::string, std::size_t>{{"+p", 1}, {"a", 1}}));
  EXPECT_EQ(term_walks(p.axioms[0], 3, 16, *p.symbols), Vector::Zero(16));
  Vector v1 = term_walks(p.axioms[0], 1, 16, *p.symbols);
  EXPECT_EQ(v1.sum(), 2.0);
  EXPECT_LE((v1.array() != 0).count(), 2);
}

TEST(Walks, TwoWalkOracle) {
  auto p = one("q(f(g(X,Y),Z), g(X,Y))");
  const auto& c = p.axioms[0];
  // Oracle: every parent-child edge of the parse tree is one 2-walk.
  std::map<std::string, std::size_t> expected;
  auto label = [&](const fol::TermPtr& t) {
    return t->is_variable() ? std::string("*") : (*p.symbols)[t->symbol()].name;
  };
  std::function<void(const fol::TermPtr&)> edges = [&](const fol::TermPtr& t) {
    for (const auto& a : t->args()) {
      ++expected[label(t) + "/" + label(a)];
      edges(a);
    }
  };
  for (const auto& a : c.literals[0].args) {
    ++expected["+q/" + label(a)];
    edges(a);
  }
  EXPECT_EQ(term_walk_strings(c, 2, *p.symbols), expected);
  EXPECT_EQ(expected["g/*"], 4u);
  EXPECT_EQ(expected["f/g"], 1u);
  EXPECT_EQ(expected["+q/g"], 1u);
}

TEST(Hashing, GoldenFile) {
  std::ifstream in(SATURN_TEST_DATA_DIR "/hash_golden.json");
  ASSERT_TRUE(in.good());
  auto j = nlohmann::json::parse(in);
  for (const auto& m : j["md5"]) {
    const auto text = m["text"].get<std::string>();
    EXPECT_EQ(md5_hex(text), m["hex"].get<std::string>());
    EXPECT_EQ(md5_mod(text, 1024), m["mod1024"].get<std::uint64_t>());
    EXPECT_EQ(md5_mod(text, 97), m["mod97"].get<std::uint64_t>());
  }
  const auto dc = j["d_chain"].get<std::size_t>();
  const auto dw = j["d_walk"].get<std::size_t>();
  ASSERT_EQ(j["cases"].size(), 20u);
  for (const auto& cs : j["cases"]) {
    auto p = one(cs["clause"].get<std::string>());
    const auto& c = p.axioms[0];
    Vector chain = chain_vectorize(chain_patterns(c, *p.symbols), dc);
    const auto expected_chain = cs["chain"].get<std::vector<double>>();
    EXPECT_EQ(std::vector<double>(chain.begin(), chain.end()), expected_chain) << cs["clause"];
    for (int l = 1; l <= 3; ++l) {
      Vector w = term_walks(c, l, dw, *p.symbols);
      const auto expected = cs["walks"][static_cast<std::size_t>(l - 1)].get<std::vector<double>>();
      EXPECT_EQ(std::vector<double>(w.begin(), w.end()), expected) << cs["clause"] << " l=" << l;
    }
  }
}

TEST(Schedule, Examples) {
  EXPECT_EQ(topological_levels(1, {}), (StageSchedule{{0}}));
  const fol::DagEdge chain[] = {{0, 1, 0}, {1, 2, 0}};
  EXPECT_EQ(topological_levels(3, chain), (StageSchedule{{2}, {1}, {0}}));
  const fol::DagEdge diamond[] = {{0, 1, 0}, {0, 2, 1}, {1, 3, 0}, {2, 3, 0}};
  EXPECT_EQ(topological_levels(4, diamond), (StageSchedule{{3}, {1, 2}, {0}}));
  EXPECT_EQ(topological_levels(4, diamond, true), (StageSchedule{{0}, {1, 2}, {3}}));
  const fol::DagEdge cycle[] = {{0, 1, 0}, {1, 0, 0}};
  EXPECT_THROW(topological_levels(2, cycle), CycleError);
}

TEST(Schedule, ClauseDagLevelsRespectEdges) {
  auto p = one("p(A) | ~q(B, f(A)) | q(C, f(A))");
  auto g = fol::clause_to_dag(p.axioms[0], *p.symbols);
  for (bool rev : {false, true}) {
    auto s = topological_levels(g, rev);
    std::vector<std::size_t> level(g.size());
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (auto u : s[i]) {
        level[u] = i;
        ++count;
      }
    EXPECT_EQ(count, g.size());
    for (const auto& e : g.edges) {
      if (rev) {
        EXPECT_GT(level[e.child], level[e.parent]);
      } else {
        EXPECT_GT(level[e.parent], level[e.child]);
      }
    }
  }
}

namespace {

VectorizerConfig gnn_config(GnnKind k, std::size_t d = 6, std::size_t rounds = 2) {
  VectorizerConfig cfg;
  cfg.gnn = k;
  cfg.d = d;
  cfg.rounds = rounds;
  cfg.vocab = 32;
  return cfg;
}

nn::ParamStore gnn_params(const VectorizerConfig& cfg, std::uint64_t seed) {
  nn::ParamStore ps;
  Rng rng(seed);
  init_gnn_params(ps, cfg, rng);
  return ps;
}

// Random clause over a small signature.
fol::Problem random_clause(std::mt19937& rng) {
  const char* preds[] = {"p", "q", "r"};
  std::function<std::string(int)> term = [&](int depth) -> std::string {
    const int k = static_cast<int>(rng() % (depth > 0 ? 5 : 3));
    switch (k) {
      case 0: return "a";
      case 1: return std::string(1, "XYZ"[rng() % 3]);
      case 2: return "b";
      case 3: return "f(" + term(depth - 1) + ")";
      default: return "g(" + term(depth - 1) + "," + term(depth - 1) + ")";
    }
  };
  std::string c;
  const int n = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n; ++i) {
    if (i) c += " | ";
    if (rng() % 2) c += "~";
    const int pi = static_cast<int>(rng() % 3);
    c += preds[pi];
    c += "(" + term(2);
    if (pi == 1) c += "," + term(2);
    c += ")";
  }
  return one(c);
}

Vector embed(GnnKind k, const fol::FormulaDag& g, nn::ParamStore& ps, const VectorizerConfig& cfg) {
  nn::Tape t;
  (void)k;
  return gnn_embed(t, g, ps, cfg).value().col(0);
}

void zero_weights(nn::ParamStore& ps) {
  for (auto& [name, p] : ps.entries()) {
    if (name == "gnn.embed" || name.find("ln_gain") != std::string::npos) continue;
    p.value.setZero();
  }
}

}  // namespace

TEST(Gcn, SingleNodeClosedForm) {
  auto cfg = gnn_config(GnnKind::Gcn, 5, 1);
  auto ps = gnn_params(cfg, 1);
  fol::FormulaDag g;
  g.nodes.push_back(fol::DagNode{fol::NodeClass::Constant, "a", 0});
  Vector h0 = ps.at("gnn.embed").value.col(embedding_column(g.nodes[0], cfg.vocab));
  Vector expected = (ps.at("gcn.W0").value * h0).cwiseMax(0.0);
  EXPECT_LT((embed(GnnKind::Gcn, g, ps, cfg) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gcn, ZeroWeightsGiveZero) {
  auto cfg = gnn_config(GnnKind::Gcn);
  auto ps = gnn_params(cfg, 2);
  zero_weights(ps);
  auto p = one("p(A) | ~q(B, f(A))");
  EXPECT_EQ(embed(GnnKind::Gcn, fol::clause_to_dag(p.axioms[0], *p.symbols), ps, cfg), Vector::Zero(6));
}

TEST(Gcn, MatchesNaiveReference) {
  auto cfg = gnn_config(GnnKind::Gcn, 7, 2);
  auto ps = gnn_params(cfg, 3);
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto p = random_clause(rng);
    auto g = fol::clause_to_dag(p.axioms[0], *p.symbols);
    EXPECT_LT((embed(GnnKind::Gcn, g, ps, cfg) - naive_gcn(g, ps, cfg)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Sage, SingleNodeClosedForm) {
  auto cfg = gnn_config(GnnKind::Sage, 5, 1);
  auto ps = gnn_params(cfg, 4);
  fol::FormulaDag g;
  g.nodes.push_back(fol::DagNode{fol::NodeClass::Constant, "a", 0});
  Vector h0 = ps.at("gnn.embed").value.col(embedding_column(g.nodes[0], cfg.vocab));
  Vector hat = (ps.at("sage.WA0").value * h0).cwiseMax(0.0);
  Vector cat(10);
  cat << h0, hat;
  Vector expected = (ps.at("sage.W0").value * cat).cwiseMax(0.0);
  EXPECT_LT((embed(GnnKind::Sage, g, ps, cfg) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Sage, MatchesNaiveReference) {
  auto cfg = gnn_config(GnnKind::Sage, 7, 2);
  auto ps = gnn_params(cfg, 5);
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto p = random_clause(rng);
    auto g = fol::clause_to_dag(p.axioms[0], *p.symbols);
    Vector a = embed(GnnKind::Sage, g, ps, cfg);
    EXPECT_LT((a - naive_sage(g, ps, cfg)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(a, embed(GnnKind::Sage, g, ps, cfg));
  }
}

TEST(Staged, SingleNodeZeroWeights) {
  auto cfg = gnn_config(GnnKind::Staged, 5, 2);
  auto ps = gnn_params(cfg, 6);
  zero_weights(ps);
  fol::FormulaDag g;
  g.nodes.push_back(fol::DagNode{fol::NodeClass::Constant, "a", 0});
  EXPECT_EQ(embed(GnnKind::Staged, g, ps, cfg), Vector::Zero(5));
}

TEST(Staged, ZeroWeightsArePureResidual) {
  auto cfg = gnn_config(GnnKind::Staged, 6, 3);
  auto ps = gnn_params(cfg, 7);
  zero_weights(ps);
  auto p = one("p(A) | ~q(B, f(A)) | q(C, f(A))");
  auto g = fol::clause_to_dag(p.axioms[0], *p.symbols);
  nn::Tape t;
  Matrix h = staged_nodes(t, g, ps, cfg).value();
  EXPECT_EQ(h, h0_of(g, ps, cfg));
}

TEST(Staged, BatchedMatchesSequential) {
  for (bool root : {true, false}) {
    auto cfg = gnn_config(GnnKind::Staged, 6, 2);
    cfg.root_readout = root;
    auto ps = gnn_params(cfg, 8);
    // give the zero-initialised biases and gains some spread
    Rng r(9);
    for (auto& [name, prm] : ps.entries())
      if (name.find("ln_") != std::string::npos || name.find(".b") != std::string::npos)
        prm.value += nn::init_fan_in(prm.value.rows(), prm.value.cols(), r);
    std::mt19937 rng(8);
    for (int i = 0; i < 100; ++i) {
      auto p = random_clause(rng);
      auto g = fol::clause_to_dag(p.axioms[0], *p.symbols);
      nn::Tape t;
      Matrix batched = staged_nodes(t, g, ps, cfg).value();
      EXPECT_LT((batched - sequential_staged_nodes(g, ps, cfg)).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LT((embed(GnnKind::Staged, g, ps, cfg) - sequential_staged(g, ps, cfg)).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Gnn, RenamingGivesIdenticalBits) {
  auto p = problem_of("a: p(A) | ~q(B, f(A)) | q(C, f(A))\na: p(Z) | ~q(W, f(Z)) | q(U, f(Z))");
  for (GnnKind k : {GnnKind::Gcn, GnnKind::Sage, GnnKind::Staged}) {
    auto cfg = gnn_config(k);
    auto ps = gnn_params(cfg, 10);
    Vector a = vectorize_clause(p.axioms[0], *p.symbols, ps, cfg);
    Vector b = vectorize_clause(p.axioms[1], *p.symbols, ps, cfg);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0) << gnn_name(k);
  }
}

TEST(Gnn, GradientsMatchFiniteDifferences) {
  auto p = one("p(A) | ~q(B, f(A)) | q(a, f(A))");
  for (GnnKind k : {GnnKind::Gcn, GnnKind::Sage, GnnKind::Staged}) {
    auto cfg = gnn_config(k, 4, 2);
    auto ps = gnn_params(cfg, 11);
    auto g = fol::clause_to_dag(p.axioms[0], *p.symbols);
    Rng prng(12);
    Matrix probe = nn::init_fan_in(4, 1, prng);
    auto f = [&](nn::Tape& t) { return nn::sum(nn::hadamard(gnn_embed(t, g, ps, cfg), t.constant(probe))); };
    std::vector<nn::Parameter*> all;
    for (auto& [name, prm] : ps.entries()) all.push_back(&prm);
    EXPECT_LT(nn::grad_check_params(f, all, 1e-6, 40), 1e-4) << gnn_name(k);
  }
}

TEST(Vectorizer, SimpleOnlyLength) {
  VectorizerConfig cfg;
  cfg.chain = false;
  cfg.walk_lengths.clear();
  cfg.n_age = 17;
  nn::ParamStore ps;
  auto p = one("p(a)");
  EXPECT_EQ(vectorize_clause(p.axioms[0], *p.symbols, ps, cfg).size(), 20);
}

TEST(Vectorizer, LengthMatchesConfigArithmetic) {
  std::mt19937 rng(13);
  auto p = one("q(f(g(X,Y),Z), g(X,Y)) | ~p(a)");
  for (int i = 0; i < 20; ++i) {
    VectorizerConfig cfg;
    cfg.simple = rng() % 2;
    cfg.chain = rng() % 2;
    cfg.walk_lengths.clear();
    for (int l = 1; l <= 3; ++l)
      if (rng() % 2) cfg.walk_lengths.push_back(l);
    cfg.n_age = 1 + rng() % 40;
    cfg.d_chain = 1 + rng() % 50;
    cfg.d_walk = 1 + rng() % 50;
    cfg.gnn = static_cast<GnnKind>(rng() % 4);
    cfg.d = 2 + rng() % 6;
    cfg.vocab = 16;
    if (cfg.length() == 0) cfg.simple = true;
    const std::size_t expected = (cfg.simple ? cfg.n_age + 3 : 0) + (cfg.chain ? 2 * cfg.d_chain : 0) +
                                 cfg.walk_lengths.size() * cfg.d_walk + (cfg.gnn == GnnKind::None ? 0 : cfg.d);
    auto ps = gnn_params(cfg, static_cast<std::uint64_t>(i));
    Vector v = vectorize_clause(p.axioms[0], *p.symbols, ps, cfg);
    EXPECT_EQ(static_cast<std::size_t>(v.size()), expected);
    EXPECT_EQ(v, vectorize_clause(p.axioms[0], *p.symbols, ps, cfg));
  }
}

TEST(Vectorizer, SparseRenamingInvariance) {
  auto p = problem_of("a: r(X, f(Y)) | ~s(Y, X, a)\na: r(U, f(V)) | ~s(V, U, a)");
  VectorizerConfig cfg;
  EXPECT_EQ(sparse_features(p.axioms[0], *p.symbols, cfg), sparse_features(p.axioms[1], *p.symbols, cfg));
}

TEST(Vectorizer, ValidateEnumeratesProblems) {
  VectorizerConfig cfg;
  cfg.d_chain = 0;
  cfg.walk_lengths = {1, 4};
  cfg.gnn = GnnKind::Gcn;
  cfg.rounds = 0;
  EXPECT_EQ(cfg.validate().size(), 3u);
  EXPECT_TRUE(VectorizerConfig{}.validate().empty());
}
