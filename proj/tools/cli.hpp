#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsc/closed_forms.hpp"
#include "hsc/regimes.hpp"
#include "hsc/solvers.hpp"

namespace hsc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

struct GridSpec {
  double r_min = 1e-6;
  double r_max = 1e6;
  std::size_t n_nodes = 4096;
};

struct RunConfig {
  ProblemParams params;
  GridSpec grid;
  DescentOptions descent;
  PathOptions path;
  ProbeOptions probe;
  /// Hypothesis (H1): nu is taken to be small enough.
  bool small_nu = false;
  std::filesystem::path output_dir = "runs";
  std::uint64_t seed = 12345;
  /// Probe target: "first" -> (z1, 0), "second" -> (0, z2).
  std::string which = "first";
  /// Initial data for ground-state: "first", "second" or "both".
  std::string init = "both";
  double perturbation = 0.0;
  /// Optional r,u,v CSV used by evaluate / project / ground-state.
  std::filesystem::path profiles;
  int workers = 1;
  /// Algebraic instance for lemma and sweep --mode lemma.
  LemmaInstance lemma;
  std::vector<double> lemma_eps;
  /// sweep: mode ("classify" or "lemma") and axes name -> values.
  std::string sweep_mode = "classify";
  std::vector<std::pair<std::string, std::vector<double>>> sweep_axes;
};

/// Reads a RunConfig document. Unknown keys are rejected; malformed values
/// raise InvalidParameter naming every offending field.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& cfg);

/// Throws InvalidParameter listing offending fields. Enforces the h-profile
/// rules: constant h only below the critical sum, and a critical sum needs an
/// h vanishing at 0 and infinity unless small_nu is set.
void validate(const RunConfig& cfg);

GridPtr make_grid(const RunConfig& cfg);

/// Creates output_dir/run-NNNNNN with the next free id.
std::filesystem::path next_run_dir(const std::filesystem::path& output_dir);

/// Entry point shared by the binary and the tests. args excludes argv[0].
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hsc::cli
