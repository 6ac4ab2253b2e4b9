#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsc/closed_forms.hpp"

namespace hsc {

/// Which hypothesis on nu a theorem branch needs. The thresholds in the
/// existence theorems are not constructive, so they are reported as flags.
enum class NuCondition { None, Small, Large };

std::string to_string(NuCondition c);

struct RegimeBranch {
  bool applicable = false;
  std::string case_label;  // "i", "ii", "iii" or empty
  std::string trigger;     // human-readable hypothesis that fired
  NuCondition nu = NuCondition::None;

  bool operator==(const RegimeBranch&) const = default;
};

struct RegimeReport {
  bool subcritical = false;
  bool critical = false;
  /// Hypothesis (H): h continuous with h(0) = h(infinity) = 0.
  bool h_satisfies_H = false;
  /// Critical regime needs (H) or the small-nu hypothesis (H1).
  bool critical_needs_small_nu = false;
  /// lambda1 == lambda2: both semi-trivial levels coincide.
  bool boundary = false;

  RegimeBranch thm_1_1;
  std::vector<RegimeBranch> thm_1_2;
  RegimeBranch thm_1_3;
  std::vector<RegimeBranch> thm_1_5;
  std::vector<std::string> notes;

  bool operator==(const RegimeReport&) const = default;
};

RegimeReport classify(const ProblemParams& params);

struct LemmaInstance {
  double A = 1.0;
  double B = 1.0;
  double theta = 2.0;
  double s = 0.0;
  int N = 3;
  double nu = 0.0;

  void validate() const;
  /// A^((N - s)/(2 - s)).
  double reference_level() const;
};

struct SigmaGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 10000;

  /// [1e-6, 1e3] * A^((N-s)/(2-s)) with 2e4 log-spaced points.
  static SigmaGrid around(const LemmaInstance& inst, std::size_t points = 20000);
  /// Relative width of one log-spaced cell.
  double cell_ratio() const;
};

/// Brute-force infimum of
///   Sigma_nu = { sigma > 0 : A sigma^(2/2*_s) < sigma + B nu sigma^(theta/2*_s) }
/// over the grid. Empty on the grid -> std::nullopt.
std::optional<double> algebraic_inf(const LemmaInstance& inst, const SigmaGrid& grid);

/// Largest nu (by bisection on [0, nu_max]) such that algebraic_inf > (1 - eps) A^((N-s)/(2-s)).
/// Returns std::nullopt when even nu = 0 fails.
std::optional<double> lemma_threshold(LemmaInstance inst, double eps, const SigmaGrid& grid,
                                      double nu_max = 1e6, int iterations = 80);

}  // namespace hsc
