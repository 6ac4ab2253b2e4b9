#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hsc/error.hpp"
#include "hsc/regimes.hpp"

using namespace hsc;

namespace {

ProblemParams make(double l1, double l2, double a, double b, double s = 0.5, int N = 4) {
  ProblemParams p;
  p.N = N;
  p.s = s;
  p.lambda1 = l1;
  p.lambda2 = l2;
  p.alpha = a;
  p.beta = b;
  p.nu = 0.1;
  return p;
}

bool has_case(const std::vector<RegimeBranch>& v, const std::string& c) {
  for (const auto& b : v) {
    if (b.applicable && b.case_label == c) return true;
  }
  return false;
}

}  // namespace

TEST(Classify, BothExponentsBelowTwo) {
  const RegimeReport r = classify(make(0.3, 0.1, 1.5, 1.5));
  EXPECT_TRUE(r.subcritical);
  EXPECT_FALSE(r.critical);
  EXPECT_TRUE(r.thm_1_1.applicable);
  EXPECT_EQ(r.thm_1_1.nu, NuCondition::Large);
  EXPECT_TRUE(has_case(r.thm_1_2, "i"));
  EXPECT_FALSE(has_case(r.thm_1_2, "ii"));
  EXPECT_FALSE(r.thm_1_3.applicable);
  const RegimeReport sym = classify(make(0.1, 0.3, 1.5, 1.5));
  EXPECT_TRUE(has_case(sym.thm_1_2, "ii"));
}

TEST(Classify, LargeExponentsSmallCoupling) {
  const RegimeReport r = classify(make(0.1, 0.2, 1.6, 1.6, 0.0, 3));
  EXPECT_FALSE(r.thm_1_3.applicable);
  ProblemParams p = make(0.1, 0.2, 2.5, 2.5, 0.0, 3);
  const RegimeReport big = classify(p);
  ASSERT_TRUE(big.thm_1_3.applicable);
  EXPECT_EQ(big.thm_1_3.case_label, "i");
  EXPECT_EQ(big.thm_1_3.nu, NuCondition::Small);
  p.lambda1 = 0.2;
  p.lambda2 = 0.1;
  EXPECT_EQ(classify(p).thm_1_3.case_label, "ii");
  p.lambda2 = 0.2;
  EXPECT_EQ(classify(p).thm_1_3.case_label, "iii");
  EXPECT_TRUE(classify(p).boundary);
}

TEST(Classify, BoundStateBranch) {
  // alpha = 2.2 with N = 4, s = 1 would force beta <= 0.8, so s = 0.5 is used.
  const RegimeReport r = classify(make(0.1, 0.3, 2.2, 1.2));
  EXPECT_TRUE(has_case(r.thm_1_5, "i"));
  EXPECT_FALSE(has_case(r.thm_1_5, "ii"));
  const RegimeReport off = classify(make(0.1, 0.5, 2.2, 1.2));
  EXPECT_FALSE(has_case(off.thm_1_5, "i"));
}

TEST(Classify, CriticalHypotheses) {
  ProblemParams p = make(0.3, 0.1, 2.0, 1.5);
  p.h = HProfile::bump(1.0, 1.0);
  ASSERT_TRUE(p.critical());
  RegimeReport r = classify(p);
  EXPECT_TRUE(r.h_satisfies_H);
  EXPECT_FALSE(r.critical_needs_small_nu);
  EXPECT_TRUE(r.thm_1_1.applicable);
  p.h = HProfile::constant(1.0);
  r = classify(p);
  EXPECT_TRUE(r.critical_needs_small_nu);
  EXPECT_FALSE(r.thm_1_1.applicable);
  ASSERT_TRUE(has_case(r.thm_1_2, "i"));
  EXPECT_EQ(r.thm_1_2.front().nu, NuCondition::Small);
}

TEST(Classify, PureAndValidated) {
  const ProblemParams p = make(0.2, 0.4, 1.7, 1.7);
  EXPECT_EQ(classify(p), classify(p));
  EXPECT_THROW(classify(make(0.2, 0.4, 2.0, 2.5)), Error);
  EXPECT_THROW(classify(make(0.2, 0.4, 1.0, 1.5)), Error);
  EXPECT_THROW(classify(make(1.2, 0.4, 1.5, 1.5)), Error);
}

TEST(AlgebraicInf, NoCouplingRecoversReference) {
  LemmaInstance inst;
  inst.A = 1.0;
  inst.N = 4;
  inst.s = 1.0;
  const SigmaGrid g = SigmaGrid::around(inst);
  const auto inf = algebraic_inf(inst, g);
  ASSERT_TRUE(inf);
  EXPECT_GE(*inf, 1.0);
  EXPECT_LE(*inf, g.cell_ratio());
}

TEST(AlgebraicInf, RandomInstances) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> A(0.2, 5.0), s(0.0, 1.8), theta(2.0, 6.0);
  std::uniform_int_distribution<int> N(3, 7);
  for (int k = 0; k < 100; ++k) {
    LemmaInstance inst;
    inst.A = A(rng);
    inst.N = N(rng);
    inst.s = s(rng);
    inst.theta = theta(rng);
    const SigmaGrid g = SigmaGrid::around(inst, 5000);
    const auto inf = algebraic_inf(inst, g);
    ASSERT_TRUE(inf);
    const double ref = inst.reference_level();
    EXPECT_GE(*inf, ref * (1.0 - 1e-12)) << k;
    EXPECT_LE(*inf, ref * g.cell_ratio() * (1.0 + 1e-12)) << k;
  }
}

TEST(AlgebraicInf, SmallCouplingStaysClose) {
  LemmaInstance inst;
  inst.A = 1.0;
  inst.B = 1.0;
  inst.N = 4;
  inst.s = 1.0;
  inst.theta = 3.0;
  inst.nu = 1e-6;
  const auto inf = algebraic_inf(inst, SigmaGrid::around(inst));
  ASSERT_TRUE(inf);
  EXPECT_GT(*inf, 0.99);
}

TEST(AlgebraicInf, Monotone) {
  LemmaInstance inst;
  inst.A = 1.3;
  inst.B = 0.7;
  inst.N = 5;
  inst.s = 0.4;
  inst.theta = 2.5;
  const SigmaGrid g = SigmaGrid::around(inst);
  double prev = 1e300;
  for (double nu : {0.0, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    inst.nu = nu;
    const auto inf = algebraic_inf(inst, g);
    const double v = inf ? *inf : 1e300;
    EXPECT_LE(v, prev) << nu;
    prev = v;
  }
  inst.nu = 0.05;
  double prev_a = 0.0;
  for (double a : {1.0, 1.1, 1.3, 1.6, 2.0}) {
    inst.A = a;
    const auto inf = algebraic_inf(inst, g);
    ASSERT_TRUE(inf);
    EXPECT_GE(*inf, prev_a);
    prev_a = *inf;
  }
}

TEST(LemmaThreshold, BisectionFindsCoupling) {
  LemmaInstance inst;
  inst.A = 2.0;
  inst.B = 1.5;
  inst.N = 4;
  inst.s = 0.5;
  inst.theta = 2.4;
  const SigmaGrid g = SigmaGrid::around(inst);
  for (double eps : {0.1, 0.01}) {
    const auto nu = lemma_threshold(inst, eps, g);
    ASSERT_TRUE(nu);
    EXPECT_GT(*nu, 0.0);
    for (double f : {0.0, 0.25, 0.5, 0.9}) {
      inst.nu = f * *nu;
      const auto inf = algebraic_inf(inst, g);
      EXPECT_TRUE(!inf || *inf > (1.0 - eps) * inst.reference_level()) << eps << " " << f;
    }
  }
}

TEST(LemmaInstance, Validation) {
  LemmaInstance inst;
  inst.theta = 1.5;
  EXPECT_THROW(inst.validate(), Error);
  inst.theta = 2.0;
  inst.A = 0.0;
  EXPECT_THROW(inst.validate(), Error);
}
