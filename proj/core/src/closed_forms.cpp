#include "hsc/closed_forms.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "hsc/error.hpp"

namespace hsc {

namespace {

void require_dimension(int N) {
  if (N < 3) {
    throw Error(ErrorKind::InvalidDimension, "N must be >= 3, got " + std::to_string(N));
  }
}

void require_s(double s) {
  if (!(s >= 0.0 && s < 2.0)) {
    throw Error(ErrorKind::InvalidParameter, "s must lie in [0, 2)");
  }
}

void require_lambda(int N, double lambda) {
  if (!(lambda >= 0.0 && lambda < hardy_constant(N))) {
    std::ostringstream msg;
    msg << "lambda must lie in [0, Lambda_N) = [0, " << hardy_constant(N) << "), got " << lambda;
    throw Error(ErrorKind::InvalidParameter, msg.str());
  }
}

}  // namespace

double HProfile::operator()(double r) const {
  if (kind == Kind::Constant) return c;
  // r^p / (1 + r^(p+q)) evaluated without overflow for large r.
  const double lr = std::log(r);
  const double e = (p + q) * lr;
  if (e > 0.0) return std::exp(p * lr - e - std::log1p(std::exp(-e)));
  return std::exp(p * lr - std::log1p(std::exp(e)));
}

std::string HProfile::describe() const {
  std::ostringstream out;
  if (kind == Kind::Constant) {
    out << "constant(" << c << ")";
  } else {
    out << "bump(p=" << p << ", q=" << q << ")";
  }
  return out.str();
}

void HProfile::validate() const {
  if (kind == Kind::Constant && !(c > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "h: constant profile requires c > 0");
  }
  if (kind == Kind::Bump && !(p > 0.0 && q > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "h: bump profile requires p > 0 and q > 0");
  }
}

double ProblemParams::critical_exponent() const { return hsc::critical_exponent(N, s); }

bool ProblemParams::critical() const {
  return std::abs(alpha + beta - critical_exponent()) <= kCriticalSumTolerance;
}

bool ProblemParams::subcritical() const {
  return alpha + beta < critical_exponent() - kCriticalSumTolerance;
}

void ProblemParams::validate() const {
  require_dimension(N);
  std::vector<std::string> bad;
  if (!(s >= 0.0 && s < 2.0)) bad.emplace_back("s (need 0 <= s < 2)");
  const double hardy = hardy_constant(N);
  if (!(lambda1 >= 0.0 && lambda1 < hardy)) bad.emplace_back("lambda1 (need 0 <= lambda1 < Lambda_N)");
  if (!(lambda2 >= 0.0 && lambda2 < hardy)) bad.emplace_back("lambda2 (need 0 <= lambda2 < Lambda_N)");
  if (!(alpha > 1.0)) bad.emplace_back("alpha (need alpha > 1)");
  if (!(beta > 1.0)) bad.emplace_back("beta (need beta > 1)");
  if (bad.empty() && alpha + beta > critical_exponent() + kCriticalSumTolerance) {
    bad.emplace_back("alpha+beta (need alpha + beta <= 2*_s)");
  }
  if (!(nu >= 0.0)) bad.emplace_back("nu (need nu >= 0)");
  if (!bad.empty()) {
    std::string msg = "invalid fields:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw Error(ErrorKind::InvalidParameter, msg);
  }
  h.validate();
}

double hardy_constant(int N) {
  require_dimension(N);
  const double d = N - 2;
  return d * d / 4.0;
}

double critical_exponent(int N, double s) {
  require_dimension(N);
  require_s(s);
  return 2.0 * (N - s) / (N - 2.0);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidParameter, "log_gamma requires x > 0");
  static constexpr std::array<double, 9> kCoeff = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kG = 7.0;
  if (x < 0.5) {
    // Gamma(x) = Gamma(x + 1) / x keeps the series argument >= 0.5.
    return log_gamma(x + 1.0) - std::log(x);
  }
  const double y = x - 1.0;
  double series = kCoeff[0];
  for (std::size_t i = 1; i < kCoeff.size(); ++i) series += kCoeff[i] / (y + static_cast<double>(i));
  const double t = y + kG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (y + 0.5) * std::log(t) - t + std::log(series);
}

double sobolev_constant(int N) {
  require_dimension(N);
  const double n = N;
  return std::numbers::pi * n * (n - 2.0) *
         std::exp(2.0 / n * (log_gamma(n / 2.0) - log_gamma(n)));
}

double hardy_exponent(int N, double lambda) {
  require_lambda(N, lambda);
  const double hardy = hardy_constant(N);
  return std::sqrt(hardy) - std::sqrt(hardy - lambda);
}

double profile_prefactor(int N, double lambda, double s) {
  require_lambda(N, lambda);
  require_s(s);
  const double hardy = hardy_constant(N);
  return 2.0 * (hardy - lambda) * (N - s) / std::sqrt(hardy);
}

double best_constant(int N, double lambda, double s) {
  require_dimension(N);
  require_s(s);
  require_lambda(N, lambda);
  const double n = N;
  const double gap = hardy_constant(N) - lambda;
  const double m = (n - s) / (2.0 - s);
  const double log_sphere =
      std::log(2.0) + n / 2.0 * std::log(std::numbers::pi) - log_gamma(n / 2.0);
  const double log_inner = std::log((n - 2.0) / (2.0 * (2.0 - s) * std::sqrt(gap))) + log_sphere +
                           2.0 * log_gamma(m) - log_gamma(2.0 * m);
  return 4.0 * gap * (n - s) / (n - 2.0) * std::exp(log_inner / m);
}

double extremal_mass(int N, double lambda, double s) {
  const double m = (N - s) / (2.0 - s);
  return std::exp(m * std::log(best_constant(N, lambda, s)));
}

double critical_level(int N, double lambda, double s) {
  return (2.0 - s) / (2.0 * (N - s)) * extremal_mass(N, lambda, s);
}

double exact_profile(int N, double lambda, double s, double mu, double r) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidParameter, "scaling mu must be > 0");
  const double n = N;
  const double a = hardy_exponent(N, lambda);
  const double amp = profile_prefactor(N, lambda, s);
  const double k = (2.0 - s) * (1.0 - 2.0 * a / (n - 2.0));
  const double lr = std::log(r / mu);
  const double e = k * lr;
  const double log1p_term = e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
  const double log_z1 =
      (n - 2.0) / (2.0 * (2.0 - s)) * std::log(amp) - a * lr - (n - 2.0) / (2.0 - s) * log1p_term;
  return std::exp(-(n - 2.0) / 2.0 * std::log(mu) + log_z1);
}

RadialFunction exact_solution(GridPtr grid, double lambda, double s, double mu) {
  const int N = grid->dimension();
  require_lambda(N, lambda);
  require_s(s);
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidParameter, "scaling mu must be > 0");
  return RadialFunction::sample(std::move(grid),
                                [&](double r) { return exact_profile(N, lambda, s, mu, r); });
}

ClosedFormBundle closed_forms(int N, double lambda1, double lambda2, double s) {
  ClosedFormBundle out;
  out.hardy_const = hardy_constant(N);
  out.crit_exp = critical_exponent(N, s);
  const double lambdas[2] = {lambda1, lambda2};
  for (int j = 0; j < 2; ++j) {
    out.a_lambda[j] = hardy_exponent(N, lambdas[j]);
    out.prefactor[j] = profile_prefactor(N, lambdas[j], s);
    out.best_const[j] = best_constant(N, lambdas[j], s);
    out.crit_level[j] = critical_level(N, lambdas[j], s);
  }
  return out;
}

SeparabilityCheck separability_check(const ProblemParams& params) {
  params.validate();
  const int N = params.N;
  const double s = params.s;
  const double level1 = critical_level(N, params.lambda1, s);
  const double level2 = critical_level(N, params.lambda2, s);
  const double hardy = hardy_constant(N);

  SeparabilityCheck out;
  out.cond_i = 2.0 * level2 > level1 && level1 > level2;
  out.cond_ii = 2.0 * level1 > level2 && level2 > level1;
  out.ratio = (hardy - params.lambda2) / (hardy - params.lambda1);
  out.threshold = std::pow(2.0, -2.0 * (2.0 - s) / (2.0 * (N - 1) - s));
  out.ratio_form_i = params.lambda2 > params.lambda1 && out.ratio > out.threshold;
  out.ratio_form_ii = params.lambda1 > params.lambda2 && 1.0 / out.ratio > out.threshold;
  return out;
}

}  // namespace hsc
