#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "saturn/fol/canonical.hpp"
#include "saturn/fol/dag.hpp"
#include "saturn/fol/tptp.hpp"
#include "saturn/fol/unify.hpp"
#include "test_util.hpp"

using namespace saturn::fol;
using saturn::testing::problem_of;

namespace {

struct Sig {
  SymbolTable table;
  SymbolId a, b, f, g, p;
  Sig() {
    a = table.intern("a", SymbolKind::Constant, 0);
    b = table.intern("b", SymbolKind::Constant, 0);
    f = table.intern("f", SymbolKind::Function, 1);
    g = table.intern("g", SymbolKind::Function, 2);
    p = table.intern("p", SymbolKind::Predicate, 2);
  }
  TermPtr A() const { return Term::apply(a); }
  TermPtr B() const { return Term::apply(b); }
  TermPtr F(TermPtr x) const { return Term::apply(f, {std::move(x)}); }
  TermPtr G(TermPtr x, TermPtr y) const { return Term::apply(g, {std::move(x), std::move(y)}); }
};

TermPtr V(VarId v) { return Term::variable(v); }

}  // namespace

TEST(Parser, SingleAxiom) {
  Problem p = parse_tptp("cnf(c1, axiom, p(X) | ~q(X)).");
  ASSERT_EQ(p.axioms.size(), 1u);
  EXPECT_EQ(p.axioms[0].literals.size(), 2u);
  EXPECT_EQ(clause_vars(p.axioms[0]).size(), 1u);
  EXPECT_TRUE(p.axioms[0].literals[0].positive);
  EXPECT_FALSE(p.axioms[0].literals[1].positive);
  EXPECT_EQ(p.axioms[0].age, 0u);
}

TEST(Parser, UnknownRole) {
  try {
    parse_tptp("cnf(c1, goal, p).");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("goal"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Parser, HypothesisIsAxiom) {
  Problem p = parse_tptp("cnf(h, hypothesis, p).\ncnf(n, negated_conjecture, ~p).");
  EXPECT_EQ(p.axioms.size(), 1u);
  EXPECT_EQ(p.negated_conjecture.size(), 1u);
  EXPECT_TRUE(p.negated_conjecture[0].sos);
  EXPECT_FALSE(p.axioms[0].sos);
}

TEST(Parser, ArityConflictHasPosition) {
  try {
    parse_tptp("cnf(a, axiom, p(a)).\ncnf(b, axiom, p(a, b)).");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Parser, SyntaxErrorPosition) {
  try {
    parse_tptp("% comment\ncnf(a, axiom, p(X) | ).");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Parser, RejectsFofAndInclude) {
  EXPECT_THROW(parse_tptp("fof(a, axiom, p)."), ParseError);
  EXPECT_THROW(parse_tptp("include('Axioms/SET001.ax')."), ParseError);
}

TEST(Parser, FalseIsEmptyClause) {
  Problem p = parse_tptp("cnf(e, negated_conjecture, $false).");
  ASSERT_EQ(p.negated_conjecture.size(), 1u);
  EXPECT_TRUE(p.negated_conjecture[0].empty());
}

TEST(Parser, CommentsAnnotationsAndQuotes) {
  Problem p = parse_tptp(
      "/* block\n comment */ cnf('my clause', axiom, p(X,f(Y)) | ~r, file('x.p', a)).\n"
      "cnf(n, negated_conjecture, ~p(a, f(b))).  % trailing\n");
  EXPECT_EQ(p.axioms[0].name, "my clause");
  EXPECT_EQ(p.size(), 2u);
}

TEST(Parser, RoundTrip) {
  const std::string src =
      "cnf(a1, axiom, p(X, f(Y, a)) | ~q(Y) | r).\n"
      "cnf(a2, axiom, ~p(g(Z), Z) | q(h(h(Z)))).\n"
      "cnf('quoted name', hypothesis, s(b, c, X, Y, X)).\n"
      "cnf(nc, negated_conjecture, ~r | ~s(X, X, X, X, X)).\n";
  Problem p1 = parse_tptp(src);
  Problem p2 = parse_tptp(to_tptp(p1));
  ASSERT_EQ(p1.size(), p2.size());
  auto in1 = p1.inputs();
  auto in2 = p2.inputs();
  for (std::size_t i = 0; i < in1.size(); ++i) {
    EXPECT_EQ(in1[i]->role, in2[i]->role);
    EXPECT_EQ(in1[i]->name, in2[i]->name);
    EXPECT_EQ(formula_string(*in1[i], *p1.symbols), formula_string(*in2[i], *p2.symbols));
    EXPECT_TRUE(same_literals(*in1[i], *in2[i]));
  }
  EXPECT_EQ(to_tptp(p1), to_tptp(p2));
}

TEST(Parser, ParseLiteralsKeepsOrder) {
  SymbolTable st;
  FreshVars fresh;
  auto lits = parse_literals("~q(X) | p(X, a)", st, fresh);
  ASSERT_EQ(lits.size(), 2u);
  EXPECT_FALSE(lits[0].positive);
  EXPECT_EQ(st[lits[1].predicate].name, "p");
}

TEST(Unify, VariableToConstant) {
  Sig s;
  auto r = unify(V(0), s.A());
  ASSERT_TRUE(r);
  ASSERT_EQ(r.mgu->size(), 1u);
  EXPECT_TRUE(equal(*r.mgu->lookup(0), s.A()));
}

TEST(Unify, OccursCheck) {
  Sig s;
  auto r = unify(V(0), s.F(V(0)));
  EXPECT_FALSE(r);
  EXPECT_EQ(r.failure, UnifyFailure::OccursCheck);
}

TEST(Unify, Clash) {
  Sig s;
  auto r = unify(s.F(s.A()), s.F(s.B()));
  EXPECT_FALSE(r);
  EXPECT_EQ(r.failure, UnifyFailure::Clash);
}

TEST(Unify, NestedApplyAndCompare) {
  Sig s;
  // f-ish binary: g(X, f(Y)) vs g(f(Z), f(a)) with X=0, Y=1, Z=2
  TermPtr l = s.G(V(0), s.F(V(1)));
  TermPtr r = s.G(s.F(V(2)), s.F(s.A()));
  auto res = unify(l, r);
  ASSERT_TRUE(res);
  EXPECT_TRUE(equal(res.mgu->apply(l), res.mgu->apply(r)));
  EXPECT_TRUE(equal(*res.mgu->lookup(0), s.F(V(2))));
  EXPECT_TRUE(equal(*res.mgu->lookup(1), s.A()));
  EXPECT_TRUE(res.mgu->idempotent());
}

namespace {

// All terms over {a, b, f/1, g/2, X0, X1, X2} up to depth 2.
std::vector<TermPtr> small_terms(const Sig& s, int depth, int nvars) {
  std::vector<TermPtr> out = {s.A(), s.B()};
  for (int v = 0; v < nvars; ++v) out.push_back(V(static_cast<VarId>(v)));
  if (depth == 0) return out;
  auto sub = small_terms(s, depth - 1, nvars);
  for (const auto& x : sub) out.push_back(s.F(x));
  for (const auto& x : sub)
    for (const auto& y : sub) out.push_back(s.G(x, y));
  return out;
}

TermPtr random_term(const Sig& s, std::mt19937& rng, int depth, int nvars) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 2 : 4);
  switch (pick(rng)) {
    case 0: return rng() % 2 ? s.A() : s.B();
    case 1:
    case 2: return V(static_cast<VarId>(rng() % nvars));
    case 3: return s.F(random_term(s, rng, depth - 1, nvars));
    default: return s.G(random_term(s, rng, depth - 1, nvars), random_term(s, rng, depth - 1, nvars));
  }
}

}  // namespace

TEST(Unify, RandomPairsAgreeWithExhaustiveSearch) {
  Sig s;
  std::mt19937 rng(7);
  // Ground candidate images for the two variables in play.
  const auto candidates = small_terms(s, 2, 0);
  int successes = 0, failures = 0;
  for (int trial = 0; trial < 300; ++trial) {
    TermPtr l = random_term(s, rng, 2, 2);
    TermPtr r = random_term(s, rng, 2, 2);
    auto res = unify(l, r);
    if (res) {
      ++successes;
      EXPECT_TRUE(equal(res.mgu->apply(l), res.mgu->apply(r)));
      EXPECT_TRUE(res.mgu->idempotent());
      continue;
    }
    ++failures;
    // No ground instantiation of X0, X1 by terms of depth <= 2 unifies.
    for (const auto& t0 : candidates) {
      for (const auto& t1 : candidates) {
        Substitution g;
        g.bind(0, t0);
        g.bind(1, t1);
        ASSERT_FALSE(equal(g.apply(l), g.apply(r)));
      }
    }
  }
  EXPECT_GT(successes, 20);
  EXPECT_GT(failures, 20);
}

TEST(Substitution, ApplyToClause) {
  Problem p = problem_of("a: p(X) | q(X) | r(a)");
  SymbolId a;
  ASSERT_TRUE(p.symbols->find("a", SymbolKind::Constant, 0, a));
  Substitution s;
  s.bind(clause_vars(p.axioms[0])[0], Term::apply(a));
  Clause out = apply_substitution(s, p.axioms[0], 99);
  EXPECT_EQ(out.id, 99u);
  EXPECT_EQ(formula_string(out, *p.symbols), "p(a) | q(a) | r(a)");
}

TEST(Substitution, EmptyIsIdentity) {
  Problem p = problem_of("a: p(X, f(Y)) | ~q(Y)");
  Clause out = apply_substitution(Substitution{}, p.axioms[0], 5);
  EXPECT_TRUE(same_literals(out, p.axioms[0]));
  EXPECT_EQ(out.id, 5u);
}

TEST(Substitution, Simultaneous) {
  Problem p = problem_of("a: p(X, Y) | p(a, a)");
  const auto vars = clause_vars(p.axioms[0]);
  SymbolId a;
  ASSERT_TRUE(p.symbols->find("a", SymbolKind::Constant, 0, a));
  Substitution s;
  s.bind(vars[0], Term::variable(vars[1]));
  s.bind(vars[1], Term::apply(a));
  Clause out = s.apply(p.axioms[0], 1);
  const std::string y = "V" + std::to_string(vars[1]);
  EXPECT_EQ(formula_string(out, *p.symbols), "p(" + y + ",a) | p(a,a)");
}

TEST(Substitution, DedupesAfterApply) {
  Problem p = problem_of("a: p(X) | p(a)");
  SymbolId a;
  ASSERT_TRUE(p.symbols->find("a", SymbolKind::Constant, 0, a));
  Substitution s;
  s.bind(clause_vars(p.axioms[0])[0], Term::apply(a));
  EXPECT_EQ(s.apply(p.axioms[0], 1).literals.size(), 1u);
}

TEST(RenameApart, Offset) {
  Problem p = problem_of("a: p(X)");
  FreshVars fresh(7);
  Clause r = rename_apart(p.axioms[0], fresh);
  EXPECT_EQ(formula_string(r, *p.symbols), "p(V7)");
  EXPECT_EQ(fresh.peek(), 8u);
}

TEST(RenameApart, Ground) {
  Problem p = problem_of("a: p(a) | ~q(f(b))");
  FreshVars fresh(100);
  Clause r = rename_apart(p.axioms[0], fresh);
  EXPECT_TRUE(same_literals(r, p.axioms[0]));
  EXPECT_EQ(fresh.peek(), 100u);
}

TEST(RenameApart, RandomClausesAreVariants) {
  Sig s;
  std::mt19937 rng(3);
  SymbolId q = s.table.intern("q", SymbolKind::Predicate, 1);
  FreshVars fresh(50);
  for (int i = 0; i < 100; ++i) {
    Clause c;
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) {
      Literal l;
      l.positive = rng() % 2;
      if (rng() % 2) {
        l.predicate = s.p;
        l.args = {random_term(s, rng, 2, 4), random_term(s, rng, 2, 4)};
      } else {
        l.predicate = q;
        l.args = {random_term(s, rng, 2, 4)};
      }
      c.literals.push_back(l);
    }
    dedupe_literals(c.literals);
    Clause r = rename_apart(c, fresh);
    EXPECT_TRUE(is_variant(c, r));
    EXPECT_EQ(clause_weight(r), clause_weight(c));
    for (VarId v : clause_vars(r)) EXPECT_GE(v, 50u);
  }
}

TEST(Weight, Examples) {
  Problem p = problem_of("a: p(a)\na: q(f(g(X,Y),Z), g(X,Y))\nc: $false");
  EXPECT_EQ(clause_weight(p.axioms[0]), 2u);
  EXPECT_EQ(clause_weight(p.axioms[1]), 9u);
  EXPECT_EQ(clause_weight(p.negated_conjecture[0]), 0u);

  // Recount by walking the tree.
  std::function<std::size_t(const TermPtr&)> count = [&](const TermPtr& t) {
    std::size_t n = 1;
    for (const auto& a : t->args()) n += count(a);
    return n;
  };
  std::size_t total = 0;
  for (const auto& l : p.axioms[1].literals) {
    ++total;
    for (const auto& a : l.args) total += count(a);
  }
  EXPECT_EQ(total, 9u);
}

TEST(Tautology, Detects) {
  Problem p = problem_of("a: p(X) | ~p(X)\na: p(X) | ~p(Y)");
  EXPECT_TRUE(is_tautology(p.axioms[0]));
  EXPECT_FALSE(is_tautology(p.axioms[1]));
}

TEST(Subsumption, Basic) {
  Problem p = problem_of("a: p(X, Y)\na: p(a, b) | q\na: p(X, X)\na: p(a, b)");
  EXPECT_TRUE(subsumes(p.axioms[0], p.axioms[1]));
  EXPECT_FALSE(subsumes(p.axioms[1], p.axioms[0]));
  EXPECT_FALSE(subsumes(p.axioms[2], p.axioms[3]));
}

TEST(Variant, OrderAndRenaming) {
  Problem p = problem_of("a: p(X, Y) | ~q(Y)\na: ~q(B) | p(A, B)\na: ~q(A) | p(A, B)");
  EXPECT_TRUE(is_variant(p.axioms[0], p.axioms[1]));
  EXPECT_FALSE(is_variant(p.axioms[0], p.axioms[2]));
  EXPECT_EQ(variant_key(p.axioms[0], *p.symbols), variant_key(p.axioms[1], *p.symbols));
  EXPECT_NE(variant_key(p.axioms[0], *p.symbols), variant_key(p.axioms[2], *p.symbols));
}

TEST(Canonical, VariantsGetSameOrder) {
  Problem p = problem_of("a: r(X, Y) | ~q(Y) | r(Y, X)\na: r(B, A) | r(A, B) | ~q(A)");
  Clause c1 = p.axioms[0], c2 = p.axioms[1];
  canonicalize(c1, *p.symbols);
  canonicalize(c2, *p.symbols);
  FreshVars f1(0), f2(0);
  Clause r1 = rename_apart(c1, f1), r2 = rename_apart(c2, f2);
  EXPECT_EQ(formula_string(r1, *p.symbols), formula_string(r2, *p.symbols));
}

namespace {

// Distinct subtree count computed from printed forms: one per distinct atom
// or term string, one per negated literal, one for the root.
std::size_t distinct_subtrees(const Clause& c, const SymbolTable& st) {
  std::set<std::string> seen;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    seen.insert("t:" + to_string(t, st));
    for (const auto& a : t->args()) walk(a);
  };
  for (const auto& l : c.literals) {
    Literal atom = l;
    atom.positive = true;
    seen.insert("a:" + to_string(atom, st));
    if (!l.positive) seen.insert("n:" + to_string(atom, st));
    for (const auto& a : l.args) walk(a);
  }
  return seen.size() + 1;
}

}  // namespace

TEST(Dag, SharedSubtrees) {
  Problem p = problem_of("a: p(A) | ~q(B, f(A)) | q(C, f(A))");
  const Clause& c = p.axioms[0];
  FormulaDag d = clause_to_dag(c, *p.symbols);
  EXPECT_EQ(d.size(), distinct_subtrees(c, *p.symbols));
  EXPECT_EQ(d.size(), 9u);
  std::size_t fnodes = 0, vars = 0;
  for (const auto& n : d.nodes) {
    if (n.cls == NodeClass::Function && n.label == "f") ++fnodes;
    if (n.cls == NodeClass::Variable) ++vars;
  }
  EXPECT_EQ(fnodes, 1u);
  EXPECT_EQ(vars, 3u);
  EXPECT_EQ(d.root, d.size() - 1);
  EXPECT_EQ(d.nodes[d.root].cls, NodeClass::ClauseRoot);
  for (const auto& e : d.edges) EXPECT_GT(e.parent, e.child);
}

TEST(Dag, GroundUnit) {
  Problem p = problem_of("a: p(a)");
  FormulaDag d = clause_to_dag(p.axioms[0], *p.symbols);
  ASSERT_EQ(d.size(), 3u);
  ASSERT_EQ(d.edges.size(), 2u);
  EXPECT_EQ(d.nodes[0].cls, NodeClass::Constant);
  EXPECT_EQ(d.nodes[1].cls, NodeClass::Predicate);
  EXPECT_EQ(d.nodes[2].cls, NodeClass::ClauseRoot);
}

TEST(Dag, RenamingGivesIdenticalGraph) {
  Problem p = problem_of("a: p(A) | ~q(B, f(A)) | q(C, f(A))\na: p(Z) | ~q(W, f(Z)) | q(U, f(Z))");
  FormulaDag d1 = clause_to_dag(p.axioms[0], *p.symbols);
  FormulaDag d2 = clause_to_dag(p.axioms[1], *p.symbols);
  ASSERT_EQ(d1.size(), d2.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    EXPECT_EQ(d1.nodes[i].cls, d2.nodes[i].cls);
    EXPECT_EQ(d1.nodes[i].label, d2.nodes[i].label);
  }
  EXPECT_EQ(d1.edges, d2.edges);
}

TEST(Dag, EdgeTypes) {
  EXPECT_EQ(arg_edge_type(0), 0);
  EXPECT_EQ(arg_edge_type(7), 7);
  EXPECT_EQ(arg_edge_type(8), kOverflowEdge);
  EXPECT_EQ(arg_edge_type(20), kOverflowEdge);
}

TEST(Symbols, ArityConflict) {
  SymbolTable t;
  t.intern("f", SymbolKind::Function, 1);
  EXPECT_THROW(t.intern("f", SymbolKind::Function, 2), ArityConflict);
  EXPECT_EQ(t.intern("f", SymbolKind::Function, 1), t.intern("f", SymbolKind::Function, 1));
}
