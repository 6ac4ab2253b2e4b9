#include "hsc/energy.hpp"

#include <cmath>

#include "hsc/error.hpp"

namespace hsc {

namespace {

// |x|^p or (x^+)^p.
inline double nl_pow(double x, double p, Nonlinearity nl) {
  const double a = nl == Nonlinearity::Full ? std::abs(x) : (x > 0.0 ? x : 0.0);
  return a == 0.0 ? 0.0 : std::pow(a, p);
}

// Derivative of nl_pow with respect to x, with value 0 at x = 0.
inline double nl_pow_derivative(double x, double p, Nonlinearity nl) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) {
    return nl == Nonlinearity::Full ? -p * std::pow(-x, p - 1.0) : 0.0;
  }
  return p * std::pow(x, p - 1.0);
}

const ProblemParams& validated(const ProblemParams& params) {
  params.validate();
  return params;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

StatePair::StatePair(RadialFunction u_, RadialFunction v_) : u(std::move(u_)), v(std::move(v_)) {
  require_same_grid(u, v);
}

StatePair StatePair::scaled(double factor) const { return {u.scaled(factor), v.scaled(factor)}; }

StatePair StatePair::axpy(double factor, const StatePair& other) const {
  return {u.axpy(factor, other.u), v.axpy(factor, other.v)};
}

StatePair StatePair::positive_part() const { return {u.positive_part(), v.positive_part()}; }

EnergyModel::EnergyModel(GridPtr grid, ProblemParams params)
    : grid_(std::move(grid)),
      params_(validated(params)),
      op_u_(grid_, params.lambda1),
      op_v_(grid_, params.lambda2) {
  if (grid_->dimension() != params_.N) {
    throw Error(ErrorKind::IncompatibleGrid, "grid dimension differs from params.N");
  }
  const auto w = grid_->weights();
  const auto r = grid_->nodes();
  hs_weight_.resize(w.size());
  coupling_weight_.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    hs_weight_[i] = w[i] * std::pow(r[i], -params_.s);
    coupling_weight_[i] = hs_weight_[i] * params_.h(r[i]);
  }
}

EnergyBreakdown EnergyModel::breakdown(const StatePair& pair, Nonlinearity nl) const {
  require_on_grid(*grid_, pair.u);
  require_on_grid(*grid_, pair.v);
  EnergyBreakdown out;
  out.kinetic_u = gradient_seminorm(*grid_, pair.u);
  out.kinetic_v = gradient_seminorm(*grid_, pair.v);
  out.hardy_u = hardy_integral(*grid_, pair.u);
  out.hardy_v = hardy_integral(*grid_, pair.v);

  const double p = params_.critical_exponent();
  const auto u = pair.u.values();
  const auto v = pair.v.values();
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.hs_u += hs_weight_[i] * nl_pow(u[i], p, nl);
    out.hs_v += hs_weight_[i] * nl_pow(v[i], p, nl);
    const double pu = nl_pow(u[i], params_.alpha, nl);
    if (pu != 0.0) out.coupling += coupling_weight_[i] * pu * nl_pow(v[i], params_.beta, nl);
  }
  out.total = 0.5 * (out.kinetic_u - params_.lambda1 * out.hardy_u) +
              0.5 * (out.kinetic_v - params_.lambda2 * out.hardy_v) - (out.hs_u + out.hs_v) / p -
              params_.nu * out.coupling;
  return out;
}

NehariTerms EnergyModel::nehari_terms(const StatePair& pair, Nonlinearity nl) const {
  const EnergyBreakdown b = breakdown(pair, nl);
  return {b.kinetic_u - params_.lambda1 * b.hardy_u + b.kinetic_v - params_.lambda2 * b.hardy_v,
          b.hs_u + b.hs_v, b.coupling};
}

double EnergyModel::nehari_residual(const StatePair& pair, Nonlinearity nl) const {
  const NehariTerms t = nehari_terms(pair, nl);
  return t.norm_sq - t.critical - params_.nu * (params_.alpha + params_.beta) * t.coupling;
}

StatePair EnergyModel::derivative(const StatePair& pair, Nonlinearity nl) const {
  require_on_grid(*grid_, pair.u);
  require_on_grid(*grid_, pair.v);
  const auto u = pair.u.values();
  const auto v = pair.v.values();
  std::vector<double> du = apply_lambda_form(*grid_, u, params_.lambda1);
  std::vector<double> dv = apply_lambda_form(*grid_, v, params_.lambda2);
  const double p = params_.critical_exponent();
  const double nu = params_.nu;
  const double a = params_.alpha;
  const double b = params_.beta;
  for (std::size_t i = 0; i < u.size(); ++i) {
    du[i] -= hs_weight_[i] * nl_pow_derivative(u[i], p, nl) / p;
    dv[i] -= hs_weight_[i] * nl_pow_derivative(v[i], p, nl) / p;
    if (nu != 0.0) {
      du[i] -= nu * coupling_weight_[i] * nl_pow_derivative(u[i], a, nl) * nl_pow(v[i], b, nl);
      dv[i] -= nu * coupling_weight_[i] * nl_pow(u[i], a, nl) * nl_pow_derivative(v[i], b, nl);
    }
  }
  return {RadialFunction(grid_, std::move(du)), RadialFunction(grid_, std::move(dv))};
}

StatePair EnergyModel::gradient(const StatePair& pair, Nonlinearity nl) const {
  StatePair d = derivative(pair, nl);
  const auto w = grid_->weights();
  std::vector<double> gu(d.u.values().begin(), d.u.values().end());
  std::vector<double> gv(d.v.values().begin(), d.v.values().end());
  for (std::size_t i = 0; i < w.size(); ++i) {
    gu[i] /= w[i];
    gv[i] /= w[i];
  }
  return {RadialFunction(grid_, std::move(gu)), RadialFunction(grid_, std::move(gv))};
}

EnergyModel::SobolevGradient EnergyModel::sobolev_gradient(const StatePair& pair,
                                                           Nonlinearity nl) const {
  const StatePair d = derivative(pair, nl);
  std::vector<double> xu = op_u_.solve(d.u.values());
  std::vector<double> xv = op_v_.solve(d.v.values());
  const double dual_sq = dot(d.u.values(), xu) + dot(d.v.values(), xv);
  return {StatePair(RadialFunction(grid_, std::move(xu)), RadialFunction(grid_, std::move(xv))),
          std::sqrt(std::max(dual_sq, 0.0))};
}

double EnergyModel::inner(const StatePair& a, const StatePair& b) const {
  const auto mu = apply_lambda_form(*grid_, b.u.values(), params_.lambda1);
  const auto mv = apply_lambda_form(*grid_, b.v.values(), params_.lambda2);
  return dot(a.u.values(), mu) + dot(a.v.values(), mv);
}

double EnergyModel::norm_sq(const StatePair& pair) const { return inner(pair, pair); }

double lambda_norm_sq(const RadialFunction& u, double lambda) {
  const RadialGrid& grid = *u.grid();
  if (!(lambda >= 0.0 && lambda < hardy_constant(grid.dimension()))) {
    throw Error(ErrorKind::InvalidParameter, "lambda must lie in [0, Lambda_N)");
  }
  return gradient_seminorm(grid, u) - lambda * hardy_integral(grid, u);
}

EnergyBreakdown energy(const StatePair& pair, const ProblemParams& params) {
  return EnergyModel(pair.grid(), params).breakdown(pair);
}

double energy_positive(const StatePair& pair, const ProblemParams& params) {
  return EnergyModel(pair.grid(), params).total(pair, Nonlinearity::PositivePart);
}

double nehari_residual(const StatePair& pair, const ProblemParams& params) {
  return EnergyModel(pair.grid(), params).nehari_residual(pair);
}

StatePair gradient(const StatePair& pair, const ProblemParams& params) {
  return EnergyModel(pair.grid(), params).gradient(pair);
}

double pairing(const StatePair& a, const StatePair& b) {
  require_same_grid(a.u, b.u);
  const auto w = a.grid()->weights();
  const auto au = a.u.values();
  const auto av = a.v.values();
  const auto bu = b.u.values();
  const auto bv = b.v.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * (au[i] * bu[i] + av[i] * bv[i]);
  return sum;
}

double second_variation_diag(const StatePair& pair, const ProblemParams& params, double tol) {
  const EnergyModel model(pair.grid(), params);
  const NehariTerms t = model.nehari_terms(pair);
  const double residual =
      t.norm_sq - t.critical - params.nu * (params.alpha + params.beta) * t.coupling;
  if (!(t.norm_sq > 0.0) || std::abs(residual) > tol * t.norm_sq) {
    throw Error(ErrorKind::Precondition, "second_variation_diag: pair is not on the Nehari manifold");
  }
  const double ab = params.alpha + params.beta;
  return (2.0 - ab) * t.norm_sq + (ab - params.critical_exponent()) * t.critical;
}

}  // namespace hsc
