#pragma once

#include "hsc/energy.hpp"

namespace hsc {

struct ProjectionResult {
  double t_star = 0.0;
  StatePair projected;
  /// Psi(projected) / ||projected||_D^2, recomputed by quadrature.
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

/// Scales (u, v) onto the Nehari manifold: t_star is the unique root of
///   A = t^(2*_s - 2) B + nu (alpha + beta) t^(alpha + beta - 2) C
/// with A = ||(u,v)||_D^2, B the critical integrals and C the coupling
/// integral. The root is bracketed, bisected and polished by Newton in log t.
/// Convergence is declared when |1 - rhs(t)/A| <= tol.
ProjectionResult project(const EnergyModel& model, const StatePair& pair, double tol = 1e-12,
                         Nonlinearity nl = Nonlinearity::Full);
ProjectionResult project(const StatePair& pair, const ProblemParams& params, double tol = 1e-12);

struct DecoupledProjection {
  double t_star = 0.0;
  RadialFunction projected;
  /// (||t u||_lambda^2 - \int |t u|^(2*_s)/|x|^s) / ||t u||_lambda^2.
  double residual = 0.0;
};

/// Projection onto the decoupled set N_j: t = (||u||_lambda^2 / \int |u|^(2*_s)/|x|^s)^(1/(2*_s-2)).
DecoupledProjection project_decoupled(const RadialFunction& u, double lambda, double s,
                                      double tol = 1e-12);

/// Energy on the manifold written through the critical and coupling integrals only:
/// (2-s)/(2(N-s)) (hs_u + hs_v) + nu (alpha + beta - 2)/2 * coupling.
/// Throws Precondition when |Psi| > tol ||(u,v)||_D^2.
double constrained_energy(const EnergyModel& model, const StatePair& pair, double tol = 1e-8,
                          Nonlinearity nl = Nonlinearity::Full);
double constrained_energy(const StatePair& pair, const ProblemParams& params, double tol = 1e-8);

/// Energy on the manifold as ((1/2) - 1/(a+b)) ||.||^2 + (1/(a+b) - 1/2*_s) (hs_u + hs_v).
double manifold_energy_norm_form(const EnergyModel& model, const StatePair& pair,
                                 Nonlinearity nl = Nonlinearity::Full);

}  // namespace hsc
