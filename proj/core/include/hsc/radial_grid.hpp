#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace hsc {

/// Log-uniform radial mesh r_i = r_min * exp(i * dt) on [r_min, r_max].
///
/// Volume integrals over R^N are approximated by the trapezoid rule in
/// t = log r, so that sum_i w_i f(r_i) ~ omega_{N-1} \int f(r) r^{N-1} dr.
/// The kinetic term is a midpoint sum in t of fourth-order differences at the
/// cell midpoints r_{i+1/2} (two-point in the end cells), so it has no
/// odd-even null mode. The midpoint rule itself is spectrally accurate for
/// integrands that decay at both ends of the grid.
class RadialGrid {
 public:
  RadialGrid(int dimension, double r_min, double r_max, std::size_t n_nodes);

  int dimension() const noexcept { return dimension_; }
  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double log_step() const noexcept { return dt_; }
  /// Surface area of the unit sphere S^{N-1}.
  double sphere_area() const noexcept { return sphere_area_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Midpoint coefficients c_j with kinetic = sum_j c_j d_j^2, d_j the midpoint
  /// difference. With two-point d_j they also give the tridiagonal metric.
  std::span<const double> stiffness() const noexcept { return stiffness_; }

  bool operator==(const RadialGrid& other) const noexcept;

 private:
  int dimension_;
  double r_min_;
  double r_max_;
  double dt_;
  double sphere_area_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> stiffness_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr build_grid(int dimension, double r_min, double r_max, std::size_t n_nodes);

/// Reference discretization: r in [1e-6, 1e6] with 4096 nodes.
GridPtr reference_grid(int dimension);

/// Radial profile sampled on a grid. Values are immutable through the public
/// operations; arithmetic returns new instances.
class RadialFunction {
 public:
  RadialFunction() = default;
  RadialFunction(GridPtr grid, std::vector<double> values);
  /// Zero function on the grid.
  explicit RadialFunction(GridPtr grid);

  static RadialFunction sample(GridPtr grid, const std::function<double(double)>& f);

  const GridPtr& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  RadialFunction scaled(double factor) const;
  RadialFunction positive_part() const;
  /// this + factor * other.
  RadialFunction axpy(double factor, const RadialFunction& other) const;
  double min_value() const;
  double max_abs() const;
  bool is_zero() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Throws IncompatibleGrid unless both functions live on equal grids.
void require_same_grid(const RadialFunction& a, const RadialFunction& b);
void require_on_grid(const RadialGrid& grid, const RadialFunction& f);

double integrate(const RadialGrid& grid, const RadialFunction& f);

/// Integral over the ball |x| < radius. The cell containing the radius is
/// integrated with linear interpolation in t, and an end correction makes the
/// rule fourth-order for smooth integrands.
double integrate_ball(const RadialGrid& grid, const RadialFunction& f, double radius);

/// Discrete \int |grad u|^2 dx.
double gradient_seminorm(const RadialGrid& grid, const RadialFunction& u);

/// Discrete \int |u|^p / |x|^s dx.
double weighted_lp(const RadialGrid& grid, const RadialFunction& u, double p, double s);

/// Discrete \int u^2 / |x|^2 dx.
double hardy_integral(const RadialGrid& grid, const RadialFunction& u);

/// Gradient-of-quadratic-form helper: returns the vector of partial
/// derivatives of 0.5 * (gradient_seminorm(u) - lambda * hardy_integral(u))
/// with respect to the nodal values (not divided by the weights).
std::vector<double> apply_lambda_form(const RadialGrid& grid, std::span<const double> u,
                                      double lambda);

/// Factorized second-order tridiagonal operator -Delta - lambda/r^2 restricted
/// to the interior nodes (end nodes are Dirichlet). It is spectrally equivalent
/// to the fourth-order form and serves as the Sobolev metric for descent
/// directions and dual norms.
class LambdaOperator {
 public:
  LambdaOperator(GridPtr grid, double lambda);

  /// Solves M x = rhs on the interior nodes; x is zero on the end nodes.
  std::vector<double> solve(std::span<const double> rhs) const;
  double lambda() const noexcept { return lambda_; }
  const GridPtr& grid() const noexcept { return grid_; }

 private:
  GridPtr grid_;
  double lambda_;
  std::vector<double> pivots_;  // LDL^T diagonal
  std::vector<double> lower_;   // L sub-diagonal
};

}  // namespace hsc
