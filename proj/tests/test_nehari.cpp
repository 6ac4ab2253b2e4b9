#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hsc/closed_forms.hpp"
#include "hsc/error.hpp"
#include "hsc/nehari.hpp"
#include "test_support.hpp"

using namespace hsc;
using hsc::testing::random_pair;
using hsc::testing::random_profile;
using hsc::testing::relative;

namespace {

ProblemParams params(double nu) {
  ProblemParams p;
  p.N = 4;
  p.s = 1.0;
  p.lambda1 = 0.2;
  p.lambda2 = 0.6;
  p.alpha = 1.5;
  p.beta = 1.4;
  p.nu = nu;
  return p;
}

// Independent decoupled energy: 1/2 ||u||^2_lambda - 1/p \int |u|^p / |x|^s.
double decoupled_energy(const RadialFunction& u, double lambda, double s) {
  const RadialGrid& g = *u.grid();
  const double p = critical_exponent(g.dimension(), s);
  return 0.5 * lambda_norm_sq(u, lambda) - weighted_lp(g, u, p, s) / p;
}

}  // namespace

TEST(Project, SemitrivialIsFixed) {
  GridPtr g = reference_grid(4);
  for (double nu : {0.0, 0.5, 5.0}) {
    const ProblemParams p = params(nu);
    const StatePair pair{exact_solution(g, p.lambda1, p.s), RadialFunction(g)};
    EXPECT_NEAR(project(pair, p).t_star, 1.0, 1e-3) << nu;
  }
}

TEST(Project, DoubledExtremalHalves) {
  GridPtr g = reference_grid(4);
  const ProblemParams p = params(0.0);
  const StatePair z{exact_solution(g, p.lambda1, p.s), RadialFunction(g)};
  const double t1 = project(z, p).t_star;
  const double t2 = project(z.scaled(2.0), p).t_star;
  EXPECT_NEAR(t2, 0.5, 1e-3);
  EXPECT_NEAR(t2, 0.5 * t1, 1e-12);
}

TEST(Project, DecoupledSumIsFixed) {
  GridPtr g = reference_grid(4);
  const ProblemParams p = params(0.0);
  const StatePair pair{exact_solution(g, p.lambda1, p.s), exact_solution(g, p.lambda2, p.s)};
  EXPECT_NEAR(project(pair, p).t_star, 1.0, 1e-3);
}

TEST(Project, IdempotentAndHomogeneous) {
  GridPtr g = reference_grid(4);
  const ProblemParams p = params(0.8);
  const EnergyModel model(g, p);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 10; ++k) {
    const StatePair pair = random_pair(g, rng);
    const ProjectionResult r = project(model, pair);
    EXPECT_LE(std::abs(r.residual), 1e-12);
    EXPECT_GT(r.bracket_hi, r.bracket_lo);
    EXPECT_NEAR(project(model, r.projected).t_star, 1.0, 1e-10);
    for (double c : {0.01, 3.0, 250.0}) {
      const ProjectionResult rc = project(model, pair.scaled(c));
      EXPECT_LT(relative(rc.t_star, r.t_star / c), 1e-10);
      for (std::size_t i = 0; i < g->size(); i += 97) {
        EXPECT_NEAR(rc.projected.u[i], r.projected.u[i], 1e-10 * r.projected.u.max_abs());
      }
    }
  }
}

TEST(Project, ScalarMapIsIncreasing) {
  GridPtr g = reference_grid(4);
  const ProblemParams p = params(2.0);
  const EnergyModel model(g, p);
  std::mt19937_64 rng(19);
  const StatePair pair = random_pair(g, rng);
  const NehariTerms t = model.nehari_terms(pair);
  const double q = critical_exponent(4, p.s);
  const double ab = p.alpha + p.beta;
  double prev = 0.0;
  for (double x = 1e-3; x < 1e3; x *= 1.5) {
    const double rhs = std::pow(x, q - 2) * t.critical + p.nu * ab * std::pow(x, ab - 2) * t.coupling;
    EXPECT_GT(rhs, prev);
    prev = rhs;
  }
}

TEST(Project, EnergyBoundedBelowOnManifold) {
  GridPtr g = reference_grid(4);
  const ProblemParams p = params(0.3);
  const EnergyModel model(g, p);
  std::mt19937_64 rng(23);
  std::vector<StatePair> projected;
  double r_sq = 1e300;
  for (int k = 0; k < 100; ++k) {
    projected.push_back(project(model, random_pair(g, rng)).projected);
    r_sq = std::min(r_sq, model.norm_sq(projected.back()));
  }
  EXPECT_GT(r_sq, 0.0);
  for (const StatePair& pr : projected) {
    EXPECT_GE(model.total(pr), (0.5 - 1.0 / (p.alpha + p.beta)) * r_sq);
  }
}

TEST(Project, RejectsZero) {
  GridPtr g = reference_grid(4);
  const StatePair zero{RadialFunction(g), RadialFunction(g)};
  EXPECT_THROW(project(zero, params(0.1)), Error);
}

TEST(ProjectDecoupled, Extremal) {
  GridPtr g = reference_grid(4);
  const RadialFunction z = exact_solution(g, 0.2, 1.0);
  const double t1 = project_decoupled(z, 0.2, 1.0).t_star;
  EXPECT_NEAR(t1, 1.0, 1e-3);
  for (double c : {0.5, 4.0}) {
    EXPECT_LT(relative(project_decoupled(z.scaled(c), 0.2, 1.0).t_star, t1 / c), 1e-12);
  }
  EXPECT_THROW(project_decoupled(RadialFunction(g), 0.2, 1.0), Error);
}

TEST(ProjectDecoupled, PerturbationDoesNotLowerLevel) {
  GridPtr g = reference_grid(4);
  const RadialFunction z = exact_solution(g, 0.2, 1.0);
  const double base = decoupled_energy(project_decoupled(z, 0.2, 1.0).projected, 0.2, 1.0);
  EXPECT_LT(relative(base, critical_level(4, 0.2, 1.0)), 1e-3);
  std::mt19937_64 rng(29);
  for (int k = 0; k < 10; ++k) {
    const RadialFunction psi = random_profile(g, rng);
    const double eps = 0.05 * z.max_abs() / psi.max_abs();
    const auto pr = project_decoupled(z.axpy(eps, psi), 0.2, 1.0);
    EXPECT_GE(decoupled_energy(pr.projected, 0.2, 1.0), base * (1.0 - 1e-12));
  }
}

TEST(ConstrainedEnergy, MatchesDirectEvaluation) {
  GridPtr g = reference_grid(4);
  const ProblemParams p = params(0.6);
  const StatePair z{exact_solution(g, p.lambda1, p.s), RadialFunction(g)};
  EXPECT_LT(relative(constrained_energy(project(z, p).projected, p), critical_level(4, p.lambda1, p.s)),
            1e-3);
  const EnergyModel model(g, p);
  std::mt19937_64 rng(31);
  const StatePair pr = project(model, random_pair(g, rng)).projected;
  const NehariTerms t = model.nehari_terms(pr);
  EXPECT_GT(t.coupling, 0.0);
  const double c = constrained_energy(model, pr);
  EXPECT_LT(relative(c, model.total(pr)), 1e-10);
  EXPECT_GT(c, (2.0 - p.s) / (2.0 * (p.N - p.s)) * t.critical);
  EXPECT_THROW(constrained_energy(model, pr.scaled(1.5)), Error);
}
