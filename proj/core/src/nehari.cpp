#include "hsc/nehari.hpp"

#include <cmath>
#include <limits>

#include "hsc/error.hpp"

namespace hsc {

namespace {

// log(exp(a) + exp(b)) with -inf handled.
double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Scalar Nehari map in x = log t: log(B t^(p-2) + D t^(q-2)).
struct NehariScalar {
  double log_b;
  double log_d;
  double p_minus_2;
  double q_minus_2;

  double log_rhs(double x) const {
    return log_add(log_b + p_minus_2 * x, log_d + q_minus_2 * x);
  }
  double dlog_rhs(double x) const {
    const double lb = log_b + p_minus_2 * x;
    const double ld = log_d + q_minus_2 * x;
    const double total = log_add(lb, ld);
    double out = 0.0;
    if (std::isfinite(lb)) out += p_minus_2 * std::exp(lb - total);
    if (std::isfinite(ld)) out += q_minus_2 * std::exp(ld - total);
    return out;
  }
};

double safe_log(double v) {
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace

ProjectionResult project(const EnergyModel& model, const StatePair& pair, double tol,
                         Nonlinearity nl) {
  if (pair.is_zero()) throw Error(ErrorKind::DegenerateInput, "cannot project the zero pair");
  const ProblemParams& prm = model.params();
  const NehariTerms terms = model.nehari_terms(pair, nl);
  if (!(terms.norm_sq > 0.0)) {
    throw Error(ErrorKind::DegenerateInput, "||(u,v)||_D^2 must be positive to project");
  }
  const double p = prm.critical_exponent();
  const double q = prm.alpha + prm.beta;
  const double d = prm.nu * q * terms.coupling;
  if (!(terms.critical > 0.0) && !(d > 0.0)) {
    throw Error(ErrorKind::NoProjection,
                "critical and coupling integrals vanish; no scaling reaches the manifold");
  }
  const NehariScalar f{safe_log(terms.critical), safe_log(d), p - 2.0, q - 2.0};
  const double log_a = std::log(terms.norm_sq);

  const double t0 = std::pow(terms.norm_sq / (terms.critical + d + 1.0), 1.0 / (p - 2.0));
  double x_lo = std::log(t0 * 1e-3);
  double x_hi = std::log(t0 * 1e3);
  const double expand = std::log(10.0);
  for (int k = 0; k < 400 && f.log_rhs(x_lo) >= log_a; ++k) x_lo -= expand;
  for (int k = 0; k < 400 && f.log_rhs(x_hi) <= log_a; ++k) x_hi += expand;
  if (!(f.log_rhs(x_lo) < log_a && f.log_rhs(x_hi) > log_a)) {
    throw Error(ErrorKind::NoProjection, "failed to bracket the Nehari scaling");
  }

  ProjectionResult out;
  out.bracket_lo = std::exp(x_lo);
  out.bracket_hi = std::exp(x_hi);

  // Bisection until the bracket is tight enough for Newton, then safeguarded Newton.
  double x = 0.5 * (x_lo + x_hi);
  int it = 0;
  for (; it < 200; ++it) {
    const double g = f.log_rhs(x) - log_a;
    if (std::abs(std::expm1(g)) <= tol) break;
    if (g > 0.0) {
      x_hi = x;
    } else {
      x_lo = x;
    }
    const double slope = f.dlog_rhs(x);
    double next = x - g / slope;
    if (!(next > x_lo && next < x_hi) || x_hi - x_lo > 1.0) next = 0.5 * (x_lo + x_hi);
    x = next;
  }
  out.iterations = it;
  out.t_star = std::exp(x);
  out.projected = pair.scaled(out.t_star);
  const NehariTerms after = model.nehari_terms(out.projected, nl);
  out.residual = (after.norm_sq - after.critical - prm.nu * q * after.coupling) / after.norm_sq;
  return out;
}

ProjectionResult project(const StatePair& pair, const ProblemParams& params, double tol) {
  return project(EnergyModel(pair.grid(), params), pair, tol);
}

DecoupledProjection project_decoupled(const RadialFunction& u, double lambda, double s,
                                      double tol) {
  const RadialGrid& grid = *u.grid();
  if (u.is_zero()) throw Error(ErrorKind::DegenerateInput, "cannot project the zero function");
  const double p = critical_exponent(grid.dimension(), s);
  const double norm_sq = lambda_norm_sq(u, lambda);
  const double crit = weighted_lp(grid, u, p, s);
  if (!(crit > 0.0)) throw Error(ErrorKind::NoProjection, "critical integral vanishes");
  if (!(norm_sq > 0.0)) throw Error(ErrorKind::DegenerateInput, "||u||_lambda^2 must be positive");
  DecoupledProjection out;
  out.t_star = std::exp((std::log(norm_sq) - std::log(crit)) / (p - 2.0));
  out.projected = u.scaled(out.t_star);
  const double n2 = lambda_norm_sq(out.projected, lambda);
  out.residual = (n2 - weighted_lp(grid, out.projected, p, s)) / n2;
  if (std::abs(out.residual) > std::max(tol, 1e-10)) {
    throw Error(ErrorKind::NoProjection, "decoupled projection did not reach the manifold");
  }
  return out;
}

double constrained_energy(const EnergyModel& model, const StatePair& pair, double tol,
                          Nonlinearity nl) {
  const ProblemParams& prm = model.params();
  const NehariTerms t = model.nehari_terms(pair, nl);
  const double q = prm.alpha + prm.beta;
  const double residual = t.norm_sq - t.critical - prm.nu * q * t.coupling;
  if (!(t.norm_sq > 0.0) || std::abs(residual) > tol * t.norm_sq) {
    throw Error(ErrorKind::Precondition, "constrained_energy: pair is not on the Nehari manifold");
  }
  return (2.0 - prm.s) / (2.0 * (prm.N - prm.s)) * t.critical +
         prm.nu * (q - 2.0) / 2.0 * t.coupling;
}

double constrained_energy(const StatePair& pair, const ProblemParams& params, double tol) {
  return constrained_energy(EnergyModel(pair.grid(), params), pair, tol);
}

double manifold_energy_norm_form(const EnergyModel& model, const StatePair& pair,
                                 Nonlinearity nl) {
  const ProblemParams& prm = model.params();
  const NehariTerms t = model.nehari_terms(pair, nl);
  const double q = prm.alpha + prm.beta;
  return (0.5 - 1.0 / q) * t.norm_sq + (1.0 / q - 1.0 / prm.critical_exponent()) * t.critical;
}

}  // namespace hsc
