#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "wpo/algebra.hpp"

using namespace wpo;
using namespace oracles;
using testing_support::T;

namespace {

AlgebraParams example_matrix() {
  AlgebraParams A;
  A.kind = AlgebraKind::Matrix;
  A.dim = 2;
  Symbol f = intern("f"), g = intern("g");
  A.vec[f] = {0, 1};
  A.mat[{f, 1}] = {{1, 1}, {0, 0}};
  A.vec[g] = {0, 0};
  A.mat[{g, 1}] = {{1, 0}, {0, 0}};
  return A;
}

}  // namespace

TEST(Eval, SumExample) {
  AlgebraParams A;
  A.w[intern("f")] = 1;
  A.w[intern("a")] = 1;
  A.w0 = 1;
  EXPECT_EQ(eval_term(A, T("f(a)"), {}), Vec{2});
}

TEST(Eval, MaxExampleR5) {
  AlgebraParams A;
  A.kind = AlgebraKind::MaxPol;
  Symbol h = intern("h");
  A.wstatus[h] = WeightStatus::Max;
  EXPECT_EQ(eval_term(A, T("h(x,x)"), {{intern("x"), {3}}}), Vec{3});
}

TEST(Eval, MatrixExample) {
  EXPECT_EQ(eval_term(example_matrix(), T("g(x)"), {{intern("x"), {0, 1}}}), (Vec{0, 0}));
}

TEST(Eval, CarrierViolation) {
  AlgebraParams A;
  A.w0 = 2;
  EXPECT_THROW(eval_term(A, T("f(x)"), {{intern("x"), {1}}}), CarrierError);
  EXPECT_THROW(eval_term(A, T("f(x)"), {}), CarrierError);
}

TEST(ExpandedWeight, Examples) {
  AlgebraParams A;
  A.kind = AlgebraKind::MaxPol;
  A.w0 = 2;
  Symbol f = intern("f"), g = intern("g"), x = intern("x"), y = intern("y");
  A.wstatus[f] = WeightStatus::Max;
  A.w[f] = 9;
  A.pen[{f, 1}] = 3;
  A.w[g] = 4;
  EXPECT_EQ(expanded_weight(A, T("x")), (ExpandedWeight{{2, {{x, 1}}}}));
  auto xf = expanded_weight(A, T("f(x)"));
  std::sort(xf.begin(), xf.end());
  ExpandedWeight want{{9, {}}, {5, {{x, 1}}}};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(xf, want);
  EXPECT_EQ(expanded_weight(A, T("g(x,y)")), (ExpandedWeight{{8, {{x, 1}, {y, 1}}}}));
  // a pair weakly dominated by another one is dropped
  A.w[f] = 1;
  EXPECT_EQ(expanded_weight(A, T("f(x)")), (ExpandedWeight{{5, {{x, 1}}}}));
}

TEST(CmpLinear, Examples) {
  AlgebraParams A;
  A.w0 = 1;
  EXPECT_EQ(cmp_linear(A, T("f(x,x)"), T("g(x)")), Cmp::Greater);
  EXPECT_EQ(cmp_linear(A, T("f(x,y)"), T("f(x,y)")), Cmp::GreaterEqual);
  A.w[intern("f")] = 1;
  A.w[intern("h")] = 1;
  EXPECT_EQ(cmp_linear(A, T("f(h(x))"), T("h(h(f(x)))")), Cmp::Incomparable);
  EXPECT_EQ(cmp_linear(A, T("h(h(f(x)))"), T("f(h(x))")), Cmp::Greater);
}

TEST(CmpLinear, MissingVariable) {
  AlgebraParams A;
  A.w[intern("f")] = 5;
  EXPECT_EQ(cmp_linear(A, T("f(x)"), T("y")), Cmp::Incomparable);
}

TEST(CmpMaxPol, R3Rule3) {
  AlgebraParams A;
  A.kind = AlgebraKind::MaxPol;
  Symbol f = intern("f"), g = intern("g");
  A.wstatus[f] = A.wstatus[g] = WeightStatus::Max;
  A.pen[{g, 1}] = 1;
  EXPECT_EQ(cmp_maxpol(A, T("f(x,g(y))"), T("f(y,y)")), Cmp::Greater);
}

TEST(CmpMaxPol, MaxOfIdentityIsOnlyWeak) {
  AlgebraParams A;
  A.kind = AlgebraKind::MaxPol;
  A.wstatus[intern("f")] = WeightStatus::Max;
  EXPECT_EQ(cmp_maxpol(A, T("f(x)"), T("x")), Cmp::GreaterEqual);
}

// max(1, 2x) >= 1 + x holds over the naturals, but no single linear piece of
// the left covers the right one. The coverage test is conservative here.
TEST(CmpMaxPol, CoverageIsIncompleteOverNaturals) {
  AlgebraParams A;
  A.kind = AlgebraKind::MaxPol;
  Symbol f = intern("f"), g = intern("g");
  A.wstatus[f] = WeightStatus::Max;
  A.w[f] = 1;
  A.coef[{f, 1}] = 2;
  A.w[g] = 1;
  Term s = T("f(x)"), t = T("g(x)");
  EXPECT_EQ(cmp_maxpol(A, s, t), Cmp::Incomparable);
  EXPECT_EQ(oracle_cmp(A, s, t, scalar_range(0, 200)), Cmp::GreaterEqual);
}

TEST(CmpMatrix, TwoDimensionalExample) {
  auto A = example_matrix();
  EXPECT_EQ(cmp_matrix(A, T("f(f(x))"), T("f(g(f(x)))")), Cmp::Greater);
  EXPECT_EQ(cmp_matrix(A, T("f(g(x))"), T("f(g(x))")), Cmp::GreaterEqual);
}

TEST(Simplicity, Examples) {
  Signature sig;
  sig.add("f", 2);
  sig.add("g", 1);
  Symbol f = intern("f"), g = intern("g");
  AlgebraParams sum;
  sum.w[f] = 3;
  EXPECT_FALSE(check_weak_simplicity(sum, sig, {{f, {1, 2}}, {g, {1}}}, false));

  auto M = example_matrix();
  Signature sg;
  sg.add("g", 1);
  auto v = check_weak_simplicity(M, sg, {{g, {1}}}, false);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->symbol, g);
  EXPECT_EQ(v->witness, (Vec{0, 1}));

  AlgebraParams lin;
  lin.kind = AlgebraKind::Linear;
  lin.coef[{f, 1}] = 0;
  EXPECT_TRUE(check_weak_simplicity(lin, sig, {{f, {1}}}, false));
  EXPECT_FALSE(check_weak_simplicity(lin, sig, {{f, {2}}}, false));
}

// ---------------------------------------------------------------------------
// Oracle properties

namespace {

const std::vector<testing_support::FunSym> kFuns = {{"f", 2}, {"g", 1}, {"h", 2}, {"a", 0}, {"b", 0}};
const std::vector<std::string> kVars = {"x", "y"};

}  // namespace

class AlgebraOracle : public ::testing::TestWithParam<AlgebraKind> {};

// Exact agreement for the kinds whose normal form decides the relation.
TEST_P(AlgebraOracle, AgreesWithExhaustiveAssignments) {
  AlgebraKind kind = GetParam();
  std::mt19937 rng(100 + static_cast<int>(kind));
  int disagreements = 0;
  for (int p = 0; p < 150; ++p) {
    AlgebraParams A = random_algebra(rng, kind, kFuns);
    auto dom = decisive_domain(A);
    for (int k = 0; k < 8; ++k) {
      Term s = testing_support::random_term(rng, kFuns, kVars, 3);
      Term t = testing_support::random_term(rng, kFuns, kVars, 3);
      Cmp got = cmp_algebra(A, s, t), want = oracle_cmp(A, s, t, dom);
      if (got != want) {
        ++disagreements;
        ADD_FAILURE() << to_string(s) << " vs " << to_string(t) << ": " << to_string(got)
                      << " but oracle " << to_string(want);
      }
    }
  }
  EXPECT_EQ(disagreements, 0);
}

INSTANTIATE_TEST_SUITE_P(Kinds, AlgebraOracle,
                         ::testing::Values(AlgebraKind::Sum, AlgebraKind::Linear, AlgebraKind::Matrix));

// For max/polynomial the coverage test may be conservative but never claims
// a relation that some assignment refutes.
TEST(AlgebraOracleMaxPol, SoundOnSampledAssignments) {
  std::mt19937 rng(7);
  for (int p = 0; p < 200; ++p) {
    AlgebraParams A = random_algebra(rng, AlgebraKind::MaxPol, kFuns);
    auto dom = scalar_range(A.w0, A.w0 + 12);
    dom.push_back({A.w0 + 1000});
    for (int k = 0; k < 8; ++k) {
      Term s = testing_support::random_term(rng, kFuns, kVars, 3);
      Term t = testing_support::random_term(rng, kFuns, kVars, 3);
      Cmp got = cmp_maxpol(A, s, t), truth = oracle_cmp(A, s, t, dom);
      if (got == Cmp::Greater) EXPECT_EQ(truth, Cmp::Greater) << to_string(s) << " vs " << to_string(t);
      if (got == Cmp::GreaterEqual) EXPECT_NE(truth, Cmp::Incomparable) << to_string(s) << " vs " << to_string(t);
    }
  }
}

TEST(AlgebraOracleMaxPol, ExpandedWeightMatchesEvaluation) {
  std::mt19937 rng(8);
  for (int p = 0; p < 200; ++p) {
    AlgebraParams A = random_algebra(rng, AlgebraKind::MaxPol, kFuns);
    Term s = testing_support::random_term(rng, kFuns, kVars, 3);
    auto xw = expanded_weight(A, s);
    ASSERT_FALSE(xw.empty());
    for (Int a = A.w0; a < A.w0 + 4; ++a)
      for (Int b = A.w0; b < A.w0 + 4; ++b) {
        Assignment alpha{{intern("x"), {a}}, {intern("y"), {b}}};
        Int best = std::numeric_limits<Int>::min();
        for (const auto& gw : xw) best = std::max(best, gw_value(gw, A.w0, alpha));
        EXPECT_EQ(best, oracle_eval(A, s, alpha)[0]) << to_string(s);
      }
  }
}

TEST(AlgebraOracleMaxPol, AllMaxTotalStatusIsWeaklySimple) {
  std::mt19937 rng(9);
  Signature sig;
  for (const auto& f : kFuns) sig.add(f.name, f.arity);
  Status total;
  for (const auto& f : kFuns) {
    std::vector<int> ps;
    for (int i = 1; i <= f.arity; ++i) ps.push_back(i);
    total[intern(f.name)] = ps;
  }
  for (int p = 0; p < 200; ++p) {
    AlgebraParams A = random_algebra(rng, AlgebraKind::MaxPol, kFuns);
    for (const auto& f : kFuns) {
      A.wstatus[intern(f.name)] = WeightStatus::Max;
      for (int i = 1; i <= f.arity; ++i) A.coef[{intern(f.name), i}] = 1;
    }
    EXPECT_FALSE(check_weak_simplicity(A, sig, total, false));
  }
}

TEST(AlgebraOracle, GreaterImpliesPointwiseGreater) {
  std::mt19937 rng(10);
  for (auto kind : {AlgebraKind::Sum, AlgebraKind::Linear, AlgebraKind::MaxPol, AlgebraKind::Matrix}) {
    for (int p = 0; p < 100; ++p) {
      AlgebraParams A = random_algebra(rng, kind, kFuns);
      Term s = testing_support::random_term(rng, kFuns, kVars, 3);
      Term t = testing_support::random_term(rng, kFuns, kVars, 3);
      if (cmp_algebra(A, s, t) != Cmp::Greater) continue;
      for (const auto& alpha : assignments(A, {intern("x"), intern("y")}, sample_domain(A)))
        EXPECT_TRUE(value_gt(oracle_eval(A, s, alpha), oracle_eval(A, t, alpha)));
    }
  }
}

// The simplicity test is exact for scalar kinds and sound for matrices.
TEST(AlgebraOracle, SimplicityAgreesWithBruteForce) {
  std::mt19937 rng(12);
  Signature sig;
  for (const auto& f : kFuns) sig.add(f.name, f.arity);
  for (auto kind : {AlgebraKind::Linear, AlgebraKind::MaxPol, AlgebraKind::Matrix}) {
    for (int p = 0; p < 300; ++p) {
      AlgebraParams A = random_algebra(rng, kind, kFuns);
      for (const auto& f : kFuns)
        for (int i = 1; i <= f.arity; ++i)
          for (bool strict : {false, true}) {
            Status one{{intern(f.name), {i}}};
            bool claimed = !check_weak_simplicity(A, sig, one, strict);
            bool truth = simple_by_enumeration(A, f.name, f.arity, i, strict);
            if (kind == AlgebraKind::Matrix) {
              if (claimed) EXPECT_TRUE(truth) << f.name << " " << i;
            } else {
              EXPECT_EQ(claimed, truth) << to_string(kind) << " " << f.name << "/" << i
                                        << (strict ? " strict" : " weak");
            }
          }
    }
  }
}
