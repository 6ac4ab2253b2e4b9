#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hsc/closed_forms.hpp"
#include "hsc/energy.hpp"
#include "hsc/error.hpp"
#include "hsc/nehari.hpp"
#include "test_support.hpp"

using namespace hsc;
using hsc::testing::random_pair;
using hsc::testing::relative;

namespace {

ProblemParams base_params() {
  ProblemParams p;
  p.N = 4;
  p.s = 0.5;
  p.lambda1 = 0.3;
  p.lambda2 = 0.1;
  p.alpha = 1.6;
  p.beta = 1.4;
  p.nu = 0.7;
  return p;
}

double mass(const ProblemParams& p, double lambda) { return extremal_mass(p.N, lambda, p.s); }

}  // namespace

TEST(LambdaNorm, Basics) {
  GridPtr g = reference_grid(4);
  const RadialFunction z = exact_solution(g, 0.3, 0.5);
  EXPECT_DOUBLE_EQ(lambda_norm_sq(z, 0.0), gradient_seminorm(*g, z));
  EXPECT_LT(relative(lambda_norm_sq(z, 0.3), extremal_mass(4, 0.3, 0.5)), 1e-3);
  EXPECT_EQ(lambda_norm_sq(RadialFunction(g), 0.3), 0.0);
}

TEST(Energy, ZeroPair) {
  GridPtr g = reference_grid(4);
  const StatePair zero{RadialFunction(g), RadialFunction(g)};
  EXPECT_EQ(energy(zero, base_params()).total, 0.0);
  EXPECT_EQ(energy_positive(zero, base_params()), 0.0);
  EXPECT_EQ(nehari_residual(zero, base_params()), 0.0);
  const StatePair grad = gradient(zero, base_params());
  EXPECT_TRUE(grad.is_zero());
}

TEST(Energy, SemitrivialLevelIndependentOfScaling) {
  const ProblemParams p = base_params();
  GridPtr g = reference_grid(4);
  const double level = critical_level(4, p.lambda1, p.s);
  for (double mu : {0.1, 1.0, 10.0}) {
    const StatePair pair{exact_solution(g, p.lambda1, p.s, mu), RadialFunction(g)};
    EXPECT_LT(relative(energy(pair, p).total, level), 1e-4) << mu;
    EXPECT_LT(std::abs(nehari_residual(pair, p)), 1e-6 * lambda_norm_sq(pair.u, p.lambda1));
  }
}

TEST(Energy, ScaledExtremal) {
  const ProblemParams p = base_params();
  GridPtr g = reference_grid(4);
  const double K = mass(p, p.lambda1);
  const double q = critical_exponent(4, p.s);
  for (double t : {0.3, 1.0, 1.7}) {
    const StatePair pair{exact_solution(g, p.lambda1, p.s).scaled(t), RadialFunction(g)};
    const double expect = (t * t / 2.0 - std::pow(t, q) / q) * K;
    EXPECT_LT(std::abs(energy(pair, p).total - expect), 1e-3 * K) << t;
  }
}

TEST(Energy, PositivePartTruncation) {
  const ProblemParams p = base_params();
  GridPtr g = reference_grid(4);
  const RadialFunction z = exact_solution(g, p.lambda1, p.s);
  const StatePair pos{z, exact_solution(g, p.lambda2, p.s, 3.0)};
  EXPECT_DOUBLE_EQ(energy_positive(pos, p), energy(pos, p).total);
  const StatePair neg{z.scaled(-1.0), RadialFunction(g)};
  EXPECT_NEAR(energy_positive(neg, p), 0.5 * lambda_norm_sq(z, p.lambda1), 1e-12 * lambda_norm_sq(z, 0.0));
}

TEST(NehariResidual, DoubledExtremal) {
  ProblemParams p = base_params();
  p.nu = 0.0;
  GridPtr g = reference_grid(4);
  const double K = mass(p, p.lambda1);
  const double q = critical_exponent(4, p.s);
  const StatePair pair{exact_solution(g, p.lambda1, p.s).scaled(2.0), RadialFunction(g)};
  const double res = nehari_residual(pair, p);
  EXPECT_LT(res, 0.0);
  EXPECT_LT(std::abs(res - (4.0 * K - std::pow(2.0, q) * K)), 1e-3 * std::pow(2.0, q) * K);
}

TEST(Gradient, EulerLagrangeResidual) {
  ProblemParams p = base_params();
  p.nu = 0.0;
  for (double mu : {1.0, 4.0}) {
    GridPtr g = reference_grid(4);
    const StatePair pair{exact_solution(g, p.lambda1, p.s, mu), RadialFunction(g)};
    const EnergyModel model(g, p);
    const auto sg = model.sobolev_gradient(pair);
    EXPECT_LT(sg.dual_norm / std::sqrt(model.norm_sq(pair)), 1e-5) << mu;
  }
}

TEST(Gradient, FiniteDifferenceConsistency) {
  GridPtr g = build_grid(4, 1e-6, 1e6, 2048);
  std::mt19937_64 rng(21);
  for (const ProblemParams& p : {base_params(), [] {
         ProblemParams q = base_params();
         q.alpha = 2.2;
         q.beta = 1.2;
         q.h = HProfile::bump(1.0, 2.0);
         return q;
       }()}) {
    const StatePair pair = random_pair(g, rng);
    const double J = energy(pair, p).total;
    const StatePair grad = gradient(pair, p);
    for (int k = 0; k < 5; ++k) {
      const StatePair d = random_pair(g, rng);
      const double analytic = pairing(grad, d);
      double best = 1e300;
      for (double h : {1e-3, 1e-4, 1e-5}) {
        const double fd = (energy(pair.axpy(h, d), p).total - energy(pair.axpy(-h, d), p).total) / (2 * h);
        best = std::min(best, std::abs(fd - analytic) / (std::abs(J) + 1.0));
      }
      EXPECT_LE(best, 1e-6);
    }
  }
}

TEST(SecondVariation, SemitrivialValue) {
  ProblemParams p = base_params();
  p.nu = 0.0;
  GridPtr g = reference_grid(4);
  const double K = mass(p, p.lambda1);
  const double q = critical_exponent(4, p.s);
  const StatePair pair{exact_solution(g, p.lambda1, p.s), RadialFunction(g)};
  EXPECT_LT(std::abs(second_variation_diag(pair, p) - (2.0 - q) * K), 1e-3 * K);
}

TEST(SecondVariation, CriticalSumAndSign) {
  ProblemParams p = base_params();
  p.alpha = 1.75;
  p.beta = critical_exponent(4, p.s) - p.alpha;
  p.h = HProfile::bump(1.0, 1.0);
  GridPtr g = reference_grid(4);
  std::mt19937_64 rng(9);
  const EnergyModel model(g, p);
  const double q = critical_exponent(4, p.s);
  for (int k = 0; k < 5; ++k) {
    const StatePair pr = project(model, random_pair(g, rng)).projected;
    EXPECT_NEAR(second_variation_diag(pr, p), (2.0 - q) * model.norm_sq(pr), 1e-8 * model.norm_sq(pr));
  }
  const StatePair raw = random_pair(g, rng);
  EXPECT_THROW(second_variation_diag(raw.scaled(5.0), p), Error);
}

TEST(Energy, ManifoldIdentities) {
  const ProblemParams p = base_params();
  GridPtr g = reference_grid(4);
  const EnergyModel model(g, p);
  std::mt19937_64 rng(13);
  for (int k = 0; k < 5; ++k) {
    const StatePair pr = project(model, random_pair(g, rng)).projected;
    const double J = model.total(pr);
    EXPECT_LT(relative(manifold_energy_norm_form(model, pr), J), 1e-10);
    EXPECT_LT(relative(constrained_energy(model, pr), J), 1e-10);
  }
}
