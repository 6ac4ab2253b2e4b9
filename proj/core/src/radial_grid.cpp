#include "hsc/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hsc/error.hpp"

namespace hsc {

namespace {

// Difference u(t_{j+1/2}) * dt: fourth order at interior midpoints, two-point
// in the end cells.
double midpoint_difference(std::span<const double> u, std::size_t j) {
  if (j == 0 || j + 2 >= u.size()) return u[j + 1] - u[j];
  return (27.0 * (u[j + 1] - u[j]) - (u[j + 2] - u[j - 1])) / 24.0;
}

}  // namespace

RadialGrid::RadialGrid(int dimension, double r_min, double r_max, std::size_t n_nodes)
    : dimension_(dimension), r_min_(r_min), r_max_(r_max) {
  if (dimension < 3) {
    throw Error(ErrorKind::InvalidDimension, "grid dimension must be >= 3");
  }
  if (!(r_min > 0.0) || !(r_min < 1.0) || !(r_max > 1.0) || !std::isfinite(r_max) ||
      n_nodes < 64) {
    std::ostringstream msg;
    msg << "need 0 < r_min < 1 < r_max and n >= 64 (got r_min=" << r_min << ", r_max=" << r_max
        << ", n=" << n_nodes << ")";
    throw Error(ErrorKind::InvalidGrid, msg.str());
  }
  const double n_dim = dimension;
  sphere_area_ = 2.0 * std::pow(std::numbers::pi, n_dim / 2.0) / std::tgamma(n_dim / 2.0);
  const double t0 = std::log(r_min);
  const double t1 = std::log(r_max);
  dt_ = (t1 - t0) / static_cast<double>(n_nodes - 1);

  nodes_.resize(n_nodes);
  weights_.resize(n_nodes);
  stiffness_.resize(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double t = t0 + dt_ * static_cast<double>(i);
    nodes_[i] = std::exp(t);
    weights_[i] = sphere_area_ * std::exp(n_dim * t) * dt_;
  }
  nodes_.front() = r_min;
  nodes_.back() = r_max;
  weights_.front() *= 0.5;
  weights_.back() *= 0.5;
  for (std::size_t j = 0; j + 1 < n_nodes; ++j) {
    const double t_mid = t0 + dt_ * (static_cast<double>(j) + 0.5);
    stiffness_[j] = sphere_area_ * std::exp((n_dim - 2.0) * t_mid) / dt_;
  }
}

bool RadialGrid::operator==(const RadialGrid& other) const noexcept {
  return dimension_ == other.dimension_ && r_min_ == other.r_min_ && r_max_ == other.r_max_ &&
         nodes_.size() == other.nodes_.size();
}

GridPtr build_grid(int dimension, double r_min, double r_max, std::size_t n_nodes) {
  return std::make_shared<const RadialGrid>(dimension, r_min, r_max, n_nodes);
}

GridPtr reference_grid(int dimension) { return build_grid(dimension, 1e-6, 1e6, 4096); }

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::InvalidGrid, "radial function without grid");
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::IncompatibleGrid, "value count does not match grid size");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "non-finite nodal value");
  }
}

RadialFunction::RadialFunction(GridPtr grid)
    : RadialFunction(grid, std::vector<double>(grid ? grid->size() : 0, 0.0)) {}

RadialFunction RadialFunction::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> values(grid->size());
  const auto r = grid->nodes();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(r[i]);
  return RadialFunction(std::move(grid), std::move(values));
}

RadialFunction RadialFunction::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return RadialFunction(grid_, std::move(out));
}

RadialFunction RadialFunction::positive_part() const {
  std::vector<double> out(values_);
  for (double& v : out) v = std::max(v, 0.0);
  return RadialFunction(grid_, std::move(out));
}

RadialFunction RadialFunction::axpy(double factor, const RadialFunction& other) const {
  require_same_grid(*this, other);
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += factor * other.values_[i];
  return RadialFunction(grid_, std::move(out));
}

double RadialFunction::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double RadialFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool RadialFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void require_same_grid(const RadialFunction& a, const RadialFunction& b) {
  if (!a.grid() || !b.grid() || !(*a.grid() == *b.grid())) {
    throw Error(ErrorKind::IncompatibleGrid, "radial functions live on different grids");
  }
}

void require_on_grid(const RadialGrid& grid, const RadialFunction& f) {
  if (!f.grid() || !(*f.grid() == grid)) {
    throw Error(ErrorKind::IncompatibleGrid, "radial function is not sampled on this grid");
  }
}

double integrate(const RadialGrid& grid, const RadialFunction& f) {
  require_on_grid(grid, f);
  const auto w = grid.weights();
  const auto v = f.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * v[i];
  return sum;
}

double integrate_ball(const RadialGrid& grid, const RadialFunction& f, double radius) {
  require_on_grid(grid, f);
  const auto r = grid.nodes();
  const std::size_t n = r.size();
  if (!(radius > r[3]) || !(radius < r[n - 3])) {
    throw Error(ErrorKind::InvalidParameter, "ball radius must lie inside the grid");
  }
  const double dt = grid.log_step();
  const double n_dim = grid.dimension();
  // Integrand in t: g(t) = omega f(r) r^N.
  auto g = [&](std::size_t i) {
    return grid.sphere_area() * f[i] * std::pow(r[i], n_dim);
  };
  const double t_end = std::log(radius);
  const double t_start = std::log(r[0]);
  std::size_t k = static_cast<std::size_t>(std::floor((t_end - t_start) / dt));
  k = std::clamp<std::size_t>(k, 1, n - 3);
  const double h = t_end - (t_start + dt * static_cast<double>(k));

  double sum = 0.5 * (g(0) + g(k));
  for (std::size_t i = 1; i < k; ++i) sum += g(i);
  sum *= dt;

  // Cubic Lagrange interpolation through nodes k-1..k+2 at offset h.
  const double x = h / dt;
  const double l0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
  const double l1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
  const double l2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
  const double l3 = (x + 1.0) * x * (x - 1.0) / 6.0;
  const double g_end = l0 * g(k - 1) + l1 * g(k) + l2 * g(k + 1) + l3 * g(k + 2);
  sum += 0.5 * h * (g(k) + g_end);

  // Euler-Maclaurin end corrections for the uniform part and the partial cell.
  const double dg_start = (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * dt);
  const double dg_k = (g(k + 1) - g(k - 1)) / (2.0 * dt);
  const double d2g_k = (g(k + 1) - 2.0 * g(k) + g(k - 1)) / (dt * dt);
  sum -= dt * dt / 12.0 * (dg_k - dg_start);
  sum -= h * h * h / 12.0 * d2g_k;
  return sum;
}

double gradient_seminorm(const RadialGrid& grid, const RadialFunction& u) {
  require_on_grid(grid, u);
  const auto c = grid.stiffness();
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double d = midpoint_difference(v, j);
    sum += c[j] * d * d;
  }
  return sum;
}

double weighted_lp(const RadialGrid& grid, const RadialFunction& u, double p, double s) {
  require_on_grid(grid, u);
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidParameter, "weighted_lp requires p >= 1");
  if (!(s >= 0.0 && s <= 2.0)) {
    throw Error(ErrorKind::InvalidParameter, "weighted_lp requires 0 <= s <= 2");
  }
  const auto w = grid.weights();
  const auto r = grid.nodes();
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a == 0.0) continue;
    sum += w[i] * std::pow(a, p) * std::pow(r[i], -s);
  }
  return sum;
}

double hardy_integral(const RadialGrid& grid, const RadialFunction& u) {
  require_on_grid(grid, u);
  const auto w = grid.weights();
  const auto r = grid.nodes();
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * v[i] * v[i] / (r[i] * r[i]);
  return sum;
}

std::vector<double> apply_lambda_form(const RadialGrid& grid, std::span<const double> u,
                                      double lambda) {
  const auto c = grid.stiffness();
  const auto w = grid.weights();
  const auto r = grid.nodes();
  std::vector<double> out(u.size(), 0.0);
  const std::size_t last = c.size() - 1;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double flux = c[j] * midpoint_difference(u, j);
    if (j == 0 || j == last) {
      out[j] -= flux;
      out[j + 1] += flux;
    } else {
      out[j - 1] += flux / 24.0;
      out[j] -= 27.0 * flux / 24.0;
      out[j + 1] += 27.0 * flux / 24.0;
      out[j + 2] -= flux / 24.0;
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) out[i] -= lambda * w[i] * u[i] / (r[i] * r[i]);
  return out;
}

LambdaOperator::LambdaOperator(GridPtr grid, double lambda)
    : grid_(std::move(grid)), lambda_(lambda) {
  const auto c = grid_->stiffness();
  const auto w = grid_->weights();
  const auto r = grid_->nodes();
  const std::size_t n = grid_->size();
  // Interior unknowns are nodes 1..n-2.
  const std::size_t m = n - 2;
  pivots_.resize(m);
  lower_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    double diag = c[i - 1] + c[i] - lambda * w[i] / (r[i] * r[i]);
    if (k > 0) {
      const double off = -c[i - 1];
      lower_[k] = off / pivots_[k - 1];
      diag -= lower_[k] * off;
    }
    if (!(diag > 0.0)) {
      throw Error(ErrorKind::InvalidParameter,
                  "discrete -Delta - lambda/r^2 is not positive definite on this grid");
    }
    pivots_[k] = diag;
  }
}

std::vector<double> LambdaOperator::solve(std::span<const double> rhs) const {
  const std::size_t n = grid_->size();
  const std::size_t m = n - 2;
  std::vector<double> y(m);
  for (std::size_t k = 0; k < m; ++k) {
    y[k] = rhs[k + 1] - (k > 0 ? lower_[k] * y[k - 1] : 0.0);
  }
  for (std::size_t k = 0; k < m; ++k) y[k] /= pivots_[k];
  for (std::size_t k = m - 1; k-- > 0;) y[k] -= lower_[k + 1] * y[k + 1];
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) x[k + 1] = y[k];
  return x;
}

}  // namespace hsc
