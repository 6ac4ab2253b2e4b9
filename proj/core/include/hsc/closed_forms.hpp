#pragma once

#include <string>

#include "hsc/radial_grid.hpp"

namespace hsc {

/// Coupling weight h(x) = h(|x|). Only radial profiles are supported, which
/// keeps the radial ansatz consistent with the coupled system.
struct HProfile {
  enum class Kind { Constant, Bump };

  Kind kind = Kind::Constant;
  double c = 1.0;  // Constant: h = c
  double p = 1.0;  // Bump: h = r^p / (1 + r^(p+q))
  double q = 1.0;

  static HProfile constant(double value) { return {Kind::Constant, value, 1.0, 1.0}; }
  static HProfile bump(double p, double q) { return {Kind::Bump, 1.0, p, q}; }

  double operator()(double r) const;
  /// h continuous at 0 and infinity with h(0) = h(infinity) = 0.
  bool vanishes_at_origin_and_infinity() const { return kind == Kind::Bump; }
  std::string describe() const;
  void validate() const;
  bool operator==(const HProfile&) const = default;
};

/// Parameter tuple of the coupled Hardy-Sobolev system.
struct ProblemParams {
  int N = 3;
  double s = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 2.0;
  double beta = 2.0;
  double nu = 0.0;
  HProfile h{};

  /// Throws InvalidDimension / InvalidParameter with the offending fields.
  void validate() const;
  double critical_exponent() const;
  bool subcritical() const;
  bool critical() const;
  bool operator==(const ProblemParams&) const = default;
};

/// Tolerance used to decide alpha + beta == 2*_s.
inline constexpr double kCriticalSumTolerance = 1e-12;

double hardy_constant(int N);
double critical_exponent(int N, double s);

/// log Gamma(x) for x > 0 by a Lanczos approximation (g = 7, 9 terms).
double log_gamma(double x);

/// Best Sobolev constant pi N (N-2) (Gamma(N/2)/Gamma(N))^(2/N).
double sobolev_constant(int N);
/// a_lambda = sqrt(Lambda_N) - sqrt(Lambda_N - lambda).
double hardy_exponent(int N, double lambda);
/// A(N, lambda) = 2 (Lambda_N - lambda)(N - s)/sqrt(Lambda_N).
double profile_prefactor(int N, double lambda, double s);
/// Best constant of the Hardy-Sobolev-Rayleigh quotient, S(lambda, s).
double best_constant(int N, double lambda, double s);
/// S(lambda, s)^((N-s)/(2-s)), the common value of ||z||_lambda^2 and the
/// critical integral of every extremal z.
double extremal_mass(int N, double lambda, double s);
/// Semi-trivial energy level (2-s)/(2(N-s)) S(lambda, s)^((N-s)/(2-s)).
double critical_level(int N, double lambda, double s);

/// Pointwise value of z_mu^{lambda,s}(r).
double exact_profile(int N, double lambda, double s, double mu, double r);
RadialFunction exact_solution(GridPtr grid, double lambda, double s, double mu = 1.0);

struct ClosedFormBundle {
  double hardy_const = 0.0;
  double crit_exp = 0.0;
  double a_lambda[2] = {0.0, 0.0};
  double prefactor[2] = {0.0, 0.0};
  double best_const[2] = {0.0, 0.0};
  double crit_level[2] = {0.0, 0.0};
};

ClosedFormBundle closed_forms(int N, double lambda1, double lambda2, double s);

struct SeparabilityCheck {
  bool cond_i = false;   // 2 C(l2) > C(l1) > C(l2)
  bool cond_ii = false;  // 2 C(l1) > C(l2) > C(l1)
  double ratio = 0.0;    // (Lambda_N - l2)/(Lambda_N - l1)
  double threshold = 0.0;
  bool ratio_form_i = false;
  bool ratio_form_ii = false;
  /// True when the level inequalities and the ratio form agree for both cases.
  bool consistent() const { return cond_i == ratio_form_i && cond_ii == ratio_form_ii; }
};

SeparabilityCheck separability_check(const ProblemParams& params);

}  // namespace hsc
