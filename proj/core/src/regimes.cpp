#include "hsc/regimes.hpp"

#include <cmath>

#include "hsc/error.hpp"

namespace hsc {

namespace {

constexpr double kExponentTol = 1e-12;

bool equals_two(double x) { return std::abs(x - 2.0) <= kExponentTol; }
bool at_least_two(double x) { return x >= 2.0 - kExponentTol; }
bool below_two(double x) { return x < 2.0 - kExponentTol; }

}  // namespace

std::string to_string(NuCondition c) {
  switch (c) {
    case NuCondition::None: return "none";
    case NuCondition::Small: return "requires small nu";
    case NuCondition::Large: return "requires large nu";
  }
  return "none";
}

RegimeReport classify(const ProblemParams& params) {
  params.validate();
  RegimeReport out;
  out.subcritical = params.subcritical();
  out.critical = params.critical();
  out.h_satisfies_H = params.h.vanishes_at_origin_and_infinity();
  out.critical_needs_small_nu = out.critical && !out.h_satisfies_H;
  out.boundary = params.lambda1 == params.lambda2;

  const double a = params.alpha;
  const double b = params.beta;
  const double l1 = params.lambda1;
  const double l2 = params.lambda2;

  // In the critical case the existence branches need (H) or (H1); without (H)
  // every branch inherits the small-nu hypothesis (H1).
  const NuCondition inherited = out.critical_needs_small_nu ? NuCondition::Small : NuCondition::None;
  auto merge = [&](NuCondition own) {
    if (own == NuCondition::None) return inherited;
    return own;
  };

  if (out.subcritical || (out.critical && out.h_satisfies_H)) {
    out.thm_1_1 = {true, "", out.subcritical ? "alpha+beta<2*_s" : "alpha+beta=2*_s with (H)",
                   NuCondition::Large};
  }

  // Large-nu branches with alpha = 2 or beta = 2 are stated under (H) only.
  const bool large_nu_allowed = out.subcritical || out.h_satisfies_H;
  if (l1 >= l2) {
    if (below_two(b)) {
      out.thm_1_2.push_back({true, "i", "lambda1>=lambda2 and beta<2", merge(NuCondition::None)});
    } else if (equals_two(b) && large_nu_allowed) {
      out.thm_1_2.push_back({true, "i", "lambda1>=lambda2 and beta=2", NuCondition::Large});
    }
  }
  if (l1 <= l2) {
    if (below_two(a)) {
      out.thm_1_2.push_back({true, "ii", "lambda1<=lambda2 and alpha<2", merge(NuCondition::None)});
    } else if (equals_two(a) && large_nu_allowed) {
      out.thm_1_2.push_back({true, "ii", "lambda1<=lambda2 and alpha=2", NuCondition::Large});
    }
  }
  if (below_two(std::max(a, b))) out.notes.emplace_back("thm_1_2: max{alpha,beta}<2");

  if (at_least_two(a) && l1 < l2) {
    out.thm_1_3 = {true, "i", "alpha>=2 and lambda1<lambda2", NuCondition::Small};
  } else if (at_least_two(b) && l1 > l2) {
    out.thm_1_3 = {true, "ii", "beta>=2 and lambda1>lambda2", NuCondition::Small};
  } else if (at_least_two(a) && at_least_two(b)) {
    out.thm_1_3 = {true, "iii", "alpha,beta>=2", NuCondition::Small};
  }

  const SeparabilityCheck sep = separability_check(params);
  if (at_least_two(a) && sep.cond_i) {
    out.thm_1_5.push_back({true, "i", "alpha>=2 and 2C(l2)>C(l1)>C(l2)", NuCondition::Small});
  }
  if (at_least_two(b) && sep.cond_ii) {
    out.thm_1_5.push_back({true, "ii", "beta>=2 and 2C(l1)>C(l2)>C(l1)", NuCondition::Small});
  }

  if (out.boundary) {
    out.notes.emplace_back("boundary: lambda1 == lambda2, semi-trivial levels coincide");
  }
  if (!out.subcritical && !out.critical) {
    out.notes.emplace_back("alpha+beta exceeds 2*_s");
  }
  out.notes.emplace_back("radial ansatz: h restricted to radial profiles");
  return out;
}

void LemmaInstance::validate() const {
  if (N < 3) throw Error(ErrorKind::InvalidDimension, "N must be >= 3");
  if (!(A > 0.0 && B > 0.0)) throw Error(ErrorKind::InvalidParameter, "need A > 0 and B > 0");
  if (!(theta >= 2.0)) throw Error(ErrorKind::InvalidParameter, "need theta >= 2");
  if (!(s >= 0.0 && s < 2.0)) throw Error(ErrorKind::InvalidParameter, "need 0 <= s < 2");
  if (!(nu >= 0.0)) throw Error(ErrorKind::InvalidParameter, "need nu >= 0");
}

double LemmaInstance::reference_level() const { return std::pow(A, (N - s) / (2.0 - s)); }

SigmaGrid SigmaGrid::around(const LemmaInstance& inst, std::size_t points) {
  const double ref = inst.reference_level();
  return {1e-6 * ref, 1e3 * ref, points};
}

double SigmaGrid::cell_ratio() const {
  return std::pow(hi / lo, 1.0 / static_cast<double>(points - 1));
}

std::optional<double> algebraic_inf(const LemmaInstance& inst, const SigmaGrid& grid) {
  inst.validate();
  if (!(grid.lo > 0.0 && grid.hi > grid.lo) || grid.points < 2) {
    throw Error(ErrorKind::InvalidParameter, "sigma grid must be a positive increasing range");
  }
  const double p = critical_exponent(inst.N, inst.s);
  const double log_lo = std::log(grid.lo);
  const double step = (std::log(grid.hi) - log_lo) / static_cast<double>(grid.points - 1);
  // Sequential scan; the first member is the grid infimum.
  for (std::size_t k = 0; k < grid.points; ++k) {
    const double sigma = std::exp(log_lo + step * static_cast<double>(k));
    const double lhs = inst.A * std::pow(sigma, 2.0 / p);
    const double rhs = sigma + inst.B * inst.nu * std::pow(sigma, inst.theta / p);
    if (lhs < rhs) return sigma;
  }
  return std::nullopt;
}

std::optional<double> lemma_threshold(LemmaInstance inst, double eps, const SigmaGrid& grid,
                                      double nu_max, int iterations) {
  const double target = (1.0 - eps) * inst.reference_level();
  auto holds = [&](double nu) {
    inst.nu = nu;
    const auto inf = algebraic_inf(inst, grid);
    return !inf || *inf > target;
  };
  if (!holds(0.0)) return std::nullopt;
  if (holds(nu_max)) return nu_max;
  double lo = 0.0;
  double hi = nu_max;
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace hsc
