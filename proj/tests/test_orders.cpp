#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "wpo/orders.hpp"
#include "wpo_oracle.hpp"

using namespace wpo;
using namespace oracles;
using testing_support::R;
using testing_support::T;

namespace {

Symbol S(const char* n) { return intern(n); }

OrderParameters params_for(const std::vector<Rule>& rules) {
  OrderParameters p;
  for (const auto& r : rules) {
    p.signature.add_symbols_of(r.lhs);
    p.signature.add_symbols_of(r.rhs);
  }
  return p;
}

void expect_strict(const OrderParameters& p, const std::vector<Rule>& rules) {
  WpoComparator c(p);
  for (const auto& r : rules) EXPECT_EQ(c.compare(r.lhs, r.rhs), Cmp::Greater) << to_string(r);
}

}  // namespace

TEST(Lex, Extension) {
  auto cmp = [](int a, int b) { return a > b ? Cmp::Greater : a == b ? Cmp::GreaterEqual : Cmp::Incomparable; };
  EXPECT_EQ(lex_cmp(std::vector<int>{2, 1}, std::vector<int>{1, 5}, cmp), Cmp::Greater);
  EXPECT_EQ(lex_cmp(std::vector<int>{1, 1}, std::vector<int>{1, 1}, cmp), Cmp::GreaterEqual);
  EXPECT_EQ(lex_cmp(std::vector<int>{1, 1}, std::vector<int>{1}, cmp), Cmp::Greater);
  EXPECT_EQ(lex_cmp(std::vector<int>{1}, std::vector<int>{1, 1}, cmp), Cmp::Incomparable);
  EXPECT_EQ(lex_cmp(std::vector<int>{}, std::vector<int>{}, cmp), Cmp::GreaterEqual);
}

TEST(Lpo, FactorialRules) {
  Precedence prec{{S("fact"), 2}, {S("s"), 1}, {S("times"), 1}};
  EXPECT_TRUE(lpo_gt(prec, {}, T("fact(0)"), T("s(0)")));
  EXPECT_TRUE(lpo_gt(prec, {}, T("fact(s(x))"), T("times(s(x),fact(x))")));
  EXPECT_FALSE(lpo_gt(prec, {}, T("x"), T("x")));
  EXPECT_FALSE(lpo_gt(prec, {}, T("fact(x)"), T("y")));
}

TEST(Lpo, R1FirstRuleNeverOriented) {
  // all precedences on {f, g} with levels 0..1
  for (int lf = 0; lf < 2; ++lf)
    for (int lg = 0; lg < 2; ++lg) {
      Precedence prec{{S("f"), lf}, {S("g"), lg}};
      EXPECT_FALSE(lpo_gt(prec, {}, T("f(g(x))"), T("g(f(f(x)))")));
    }
}

TEST(Lpo, PartialStatusRejected) {
  EXPECT_THROW(lpo_gt({}, {{S("f"), {1}}}, T("f(x,y)"), T("x")), std::invalid_argument);
}

TEST(Kbo, R1SecondRuleNeedsInadmissiblePrecedence) {
  OrderParameters p = params_for({R("f(h(x))", "h(h(f(x)))")});
  p.algebra.w0 = 1;
  p.admissible = true;
  // w(h) = 0 with h maximal, as admissibility demands
  p.precedence = {{S("h"), 1}, {S("f"), 0}};
  EXPECT_EQ(kbo_tkbo_cmp(p, T("f(h(x))"), T("h(h(f(x)))")), Cmp::Incomparable);
  EXPECT_EQ(kbo_tkbo_cmp(p, T("h(h(f(x)))"), T("f(h(x))")), Cmp::Greater);
}

TEST(Kbo, VariableCases) {
  OrderParameters p = params_for({R("f(f(x))", "x")});
  p.algebra.w0 = 1;
  EXPECT_EQ(kbo_tkbo_cmp(p, T("f(f(x))"), T("x")), Cmp::Greater);
  EXPECT_EQ(kbo_tkbo_cmp(p, T("x"), T("x")), Cmp::GreaterEqual);
  EXPECT_EQ(kbo_tkbo_cmp(p, T("x"), T("f(x)")), Cmp::Incomparable);
}

TEST(Filter, Apply) {
  ArgumentFilter pi{{S("p"), 1}, {S("F"), std::vector<int>{2}}};
  EXPECT_EQ(apply_filter(pi, T("F(p(s(x)),y)")), T("F(y)"));
  EXPECT_EQ(apply_filter(pi, T("p(s(x))")), T("s(x)"));
  EXPECT_EQ(apply_filter(pi, T("g(p(x))")), T("g(x)"));
}

// ---------------------------------------------------------------------------
// The worked examples

TEST(Examples, R1WithWpoSumPos) {
  std::vector<Rule> rules{R("f(g(x))", "g(f(f(x)))"), R("f(h(x))", "h(h(f(x)))")};
  auto p = params_for(rules);
  p.algebra.w0 = 1;
  p.algebra.w[S("g")] = 1;
  p.precedence = {{S("f"), 1}};
  expect_strict(p, rules);
}

TEST(Examples, R2WithWpoSumW0Zero) {
  std::vector<Rule> rules{R("f(a,b)", "f(b,f(b,a))"), R("f(a,f(b,x))", "f(x,f(b,b))")};
  auto p = params_for(rules);
  p.algebra.w[S("a")] = 1;
  p.precedence = {{S("a"), 1}};
  p.status[S("f")] = {1, 2};
  expect_strict(p, rules);
}

TEST(Examples, R3WithWpoMax) {
  std::vector<Rule> rules{R("f(x,y)", "g(x)"), R("f(g(x),y)", "f(x,g(x))"), R("f(x,g(y))", "f(y,y)")};
  auto p = params_for(rules);
  p.algebra.kind = AlgebraKind::MaxPol;
  p.algebra.wstatus = {{S("f"), WeightStatus::Max}, {S("g"), WeightStatus::Max}};
  p.precedence = {{S("f"), 1}};
  p.status[S("f")] = {1, 2};
  // pen(g,1) > pen(f,1) = 0 alone loses f(x,y) >=_A g(x)
  p.algebra.pen[{S("g"), 1}] = 1;
  EXPECT_EQ(WpoComparator(p).compare(T("f(x,y)"), T("g(x)")), Cmp::Incomparable);
  p.algebra.pen[{S("f"), 1}] = 1;
  p.algebra.pen[{S("f"), 2}] = 1;
  expect_strict(p, rules);
  EXPECT_FALSE(lpo_gt(p.precedence, p.status, T("f(x,g(y))"), T("f(y,y)")));
}

TEST(Examples, R5WithWpoMs) {
  std::vector<Rule> rules{R("f(g(g(x,a),g(b,y)))", "f(g(g(h(x,x),b),g(y,a)))"), R("g(x,y)", "x"),
                          R("h(x,h(y,z))", "y")};
  auto p = params_for(rules);
  AlgebraParams& A = p.algebra;
  A.kind = AlgebraKind::MaxPol;
  A.wstatus = {{S("g"), WeightStatus::Pol}, {S("h"), WeightStatus::Max}, {S("f"), WeightStatus::Pol}};
  // w(b) = 0 leaves g(g(x,a),g(b,y)) and g(y,a) equal at x = 0
  A.w[S("a")] = 2;
  A.w[S("b")] = 1;
  p.status[S("f")] = {1};
  p.status[S("g")] = {1, 2};
  expect_strict(p, rules);
  // case (1) decides the inner comparison
  EXPECT_EQ(cmp_algebra(A, T("g(x,a)"), T("g(h(x,x),b)")), Cmp::Greater);
}

TEST(Examples, PredecessorPartialStatus) {
  std::vector<Rule> rules{R("F(s(x))", "F(p(s(x)))"), R("p(s(x))", "x")};
  auto p = params_for(rules);
  p.algebra.w[S("s")] = 1;
  p.status = {{S("F"), {1}}, {S("s"), {1}}, {S("p"), {}}};
  p.precedence = {{S("s"), 1}, {S("p"), 0}, {S("F"), 0}};
  WpoComparator c(p);
  EXPECT_EQ(c.compare(T("F(s(x))"), T("F(p(s(x)))")), Cmp::Greater);
  EXPECT_TRUE(c.ge(T("p(s(x))"), T("x")));

  // swapping s and p loses the strict pair
  p.precedence = {{S("s"), 0}, {S("p"), 1}, {S("F"), 0}};
  WpoComparator d(p);
  EXPECT_NE(d.compare(T("F(s(x))"), T("F(p(s(x)))")), Cmp::Greater);
}

TEST(Examples, RefinementLeastSymbol) {
  // x ⊒ p(x) by (2c) with p least and σ(p) empty
  auto p = params_for({R("F(x,s(y))", "F(p(x),p(s(y)))"), R("p(s(x))", "x")});
  p.algebra.w[S("s")] = 1;
  p.status = {{S("F"), {1}}, {S("s"), {1}}, {S("p"), {}}};
  p.precedence = {{S("s"), 1}, {S("F"), 1}, {S("p"), 0}};
  p.refinements = true;
  WpoComparator c(p);
  EXPECT_EQ(c.compare(T("x"), T("p(x)")), Cmp::GreaterEqual);
  EXPECT_TRUE(c.ge(T("F(x,s(y))"), T("F(p(x),p(s(y)))")));
  p.refinements = false;
  WpoComparator d(p);
  EXPECT_EQ(d.compare(T("x"), T("p(x)")), Cmp::Incomparable);
}

TEST(Examples, NotWeaklySimpleRejected) {
  OrderParameters p;
  p.signature.add("g", 1);
  p.algebra.kind = AlgebraKind::Matrix;
  p.algebra.mat[{S("g"), 1}] = {{1, 0}, {0, 0}};
  try {
    WpoComparator c(p);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.symbol(), S("g"));
    EXPECT_EQ(e.position(), 1);
  }
  p.status[S("g")] = {};
  EXPECT_NO_THROW(WpoComparator{p});
}

// ---------------------------------------------------------------------------
// Agreement with the literal definition

namespace {

const std::vector<testing_support::FunSym> kFuns = {{"f", 2}, {"g", 1}, {"h", 2}, {"a", 0}, {"b", 0}};
const std::vector<std::string> kVars = {"x", "y"};

}  // namespace

class AgainstDefinition : public ::testing::TestWithParam<std::tuple<AlgebraKind, bool>> {};

TEST_P(AgainstDefinition, RandomTerms) {
  auto [kind, refinements] = GetParam();
  std::mt19937 rng(static_cast<unsigned>(31 * static_cast<int>(kind) + refinements));
  for (int k = 0; k < 60; ++k) {
    RandomOrderOptions o;
    o.kind = kind;
    o.refinements = refinements;
    OrderParameters p = random_order(rng, kFuns, o);
    WpoComparator fast(p);
    NaiveWpo slow(p);
    for (int j = 0; j < 40; ++j) {
      Term s = testing_support::random_term(rng, kFuns, kVars, 3);
      Term t = testing_support::random_term(rng, kFuns, kVars, 3);
      ASSERT_EQ(fast.compare(s, t), slow.cmp(s, t)) << to_string(s) << " vs " << to_string(t);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, AgainstDefinition,
                         ::testing::Combine(::testing::Values(AlgebraKind::Sum, AlgebraKind::Linear,
                                                              AlgebraKind::MaxPol, AlgebraKind::Matrix),
                                            ::testing::Bool()));

TEST(Subsumption, WpoSumEqualsKboSample) {
  std::mt19937 rng(41);
  auto terms = testing_support::all_terms({{"f", 2}, {"g", 1}, {"a", 0}}, {"x"}, 4);
  for (int k = 0; k < 5; ++k) {
    OrderParameters p;
    for (auto n : {"f", "g", "a"}) p.precedence[S(n)] = std::uniform_int_distribution<int>(0, 2)(rng);
    p.signature.add("f", 2);
    p.signature.add("g", 1);
    p.signature.add("a", 0);
    p.algebra.w0 = 1;
    p.algebra.w[S("a")] = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
    p.algebra.w[S("f")] = std::uniform_int_distribution<int>(0, 2)(rng);
    p.algebra.w[S("g")] = std::uniform_int_distribution<int>(0, 2)(rng);
    if (p.algebra.w[S("g")] == 0) p.precedence[S("g")] = 3;  // admissible
    p.admissible = true;
    WpoComparator c(p);
    for (const auto& s : terms)
      for (const auto& t : terms)
        ASSERT_EQ(c.gt(s, t), kbo_tkbo_cmp(p, s, t) == Cmp::Greater) << to_string(s) << " vs " << to_string(t);
  }
}

TEST(Subsumption, WpoMaxZeroEqualsLpoSample) {
  std::mt19937 rng(42);
  auto terms = testing_support::all_terms({{"f", 2}, {"g", 1}, {"a", 0}}, {"x", "y"}, 4);
  for (int k = 0; k < 5; ++k) {
    OrderParameters p;
    p.signature.add("f", 2);
    p.signature.add("g", 1);
    p.signature.add("a", 0);
    for (auto n : {"f", "g", "a"}) p.precedence[S(n)] = std::uniform_int_distribution<int>(0, 2)(rng);
    p.status[S("f")] = std::uniform_int_distribution<int>(0, 1)(rng) ? std::vector<int>{1, 2} : std::vector<int>{2, 1};
    p.algebra.kind = AlgebraKind::MaxPol;
    for (auto n : {"f", "g", "a"}) p.algebra.wstatus[S(n)] = WeightStatus::Max;
    WpoComparator c(p);
    for (const auto& s : terms)
      for (const auto& t : terms)
        ASSERT_EQ(c.gt(s, t), lpo_gt(p.precedence, p.status, s, t)) << to_string(s) << " vs " << to_string(t);
  }
}
