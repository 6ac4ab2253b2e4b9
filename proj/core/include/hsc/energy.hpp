#pragma once

#include <vector>

#include "hsc/closed_forms.hpp"
#include "hsc/radial_grid.hpp"

namespace hsc {

/// A couple (u, v) sampled on one grid.
struct StatePair {
  RadialFunction u;
  RadialFunction v;

  StatePair() = default;
  StatePair(RadialFunction u_, RadialFunction v_);

  const GridPtr& grid() const { return u.grid(); }
  StatePair scaled(double factor) const;
  StatePair axpy(double factor, const StatePair& other) const;
  StatePair positive_part() const;
  bool is_zero() const { return u.is_zero() && v.is_zero(); }
};

/// Selects |u| (the energy J_nu) or u^+ (the truncated energy J_nu^+) in every
/// nonlinear term. The quadratic part always uses the full functions.
enum class Nonlinearity { Full, PositivePart };

struct EnergyBreakdown {
  double kinetic_u = 0.0;
  double kinetic_v = 0.0;
  double hardy_u = 0.0;
  double hardy_v = 0.0;
  double hs_u = 0.0;
  double hs_v = 0.0;
  double coupling = 0.0;
  double total = 0.0;
};

/// The three integrals entering the Nehari identity:
/// norm_sq = ||(u,v)||_D^2, critical = hs_u + hs_v, coupling = \int h|u|^a|v|^b/|x|^s.
struct NehariTerms {
  double norm_sq = 0.0;
  double critical = 0.0;
  double coupling = 0.0;
};

/// Grid- and parameter-bound evaluator with cached quadrature weights and the
/// factorized Sobolev metric of each component.
class EnergyModel {
 public:
  EnergyModel(GridPtr grid, ProblemParams params);

  const GridPtr& grid() const noexcept { return grid_; }
  const ProblemParams& params() const noexcept { return params_; }

  EnergyBreakdown breakdown(const StatePair& pair, Nonlinearity nl = Nonlinearity::Full) const;
  double total(const StatePair& pair, Nonlinearity nl = Nonlinearity::Full) const {
    return breakdown(pair, nl).total;
  }
  NehariTerms nehari_terms(const StatePair& pair, Nonlinearity nl = Nonlinearity::Full) const;
  /// Psi(u,v) = <J'(u,v), (u,v)>.
  double nehari_residual(const StatePair& pair, Nonlinearity nl = Nonlinearity::Full) const;

  /// Nodal partial derivatives of the discrete energy (not divided by weights).
  StatePair derivative(const StatePair& pair, Nonlinearity nl = Nonlinearity::Full) const;
  /// Quadrature-consistent gradient: sum_i w_i (g_u phi_i + g_v psi_i) equals
  /// the directional derivative of the energy along (phi, psi).
  StatePair gradient(const StatePair& pair, Nonlinearity nl = Nonlinearity::Full) const;

  struct SobolevGradient {
    StatePair direction;  // M^{-1} J' with Dirichlet end nodes
    double dual_norm = 0.0;
  };
  /// Gradient in the ||.||_D metric and the dual norm of J' (end nodes are
  /// held fixed and excluded).
  SobolevGradient sobolev_gradient(const StatePair& pair,
                                   Nonlinearity nl = Nonlinearity::Full) const;

  /// <a, b>_D = a_u^T M_1 b_u + a_v^T M_2 b_v.
  double inner(const StatePair& a, const StatePair& b) const;
  double norm_sq(const StatePair& pair) const;

  const LambdaOperator& metric(int component) const { return component == 0 ? op_u_ : op_v_; }

 private:
  GridPtr grid_;
  ProblemParams params_;
  std::vector<double> hs_weight_;        // w_i r_i^{-s}
  std::vector<double> coupling_weight_;  // w_i h(r_i) r_i^{-s}
  LambdaOperator op_u_;
  LambdaOperator op_v_;
};

double lambda_norm_sq(const RadialFunction& u, double lambda);

EnergyBreakdown energy(const StatePair& pair, const ProblemParams& params);
double energy_positive(const StatePair& pair, const ProblemParams& params);
double nehari_residual(const StatePair& pair, const ProblemParams& params);
StatePair gradient(const StatePair& pair, const ProblemParams& params);
/// Quadrature pairing sum_i w_i (a_u b_u + a_v b_v).
double pairing(const StatePair& a, const StatePair& b);

/// (2 - alpha - beta)||(u,v)||^2 + (alpha + beta - 2*_s) * critical integrals.
/// Requires |Psi| <= tol * ||(u,v)||^2.
double second_variation_diag(const StatePair& pair, const ProblemParams& params,
                             double tol = 1e-6);

}  // namespace hsc
