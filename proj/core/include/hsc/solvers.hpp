#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsc/energy.hpp"
#include "hsc/nehari.hpp"

namespace hsc {

enum class SolverKind { GroundState, MountainPass, SemitrivialProbe };
std::string to_string(SolverKind kind);

enum class Classification { LocalMin, Saddle, Inconclusive };
std::string to_string(Classification c);

struct LevelDiagnostics {
  double level1 = 0.0;  // C(lambda1, s)
  double level2 = 0.0;  // C(lambda2, s)
  double min_level = 0.0;
  double sum_level = 0.0;

  static LevelDiagnostics of(const ProblemParams& params);
};

struct TraceEntry {
  int iteration = 0;
  double energy = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct SolverReport {
  SolverKind kind = SolverKind::GroundState;
  ProblemParams params;
  double energy = 0.0;
  /// Dual norm of J' relative to ||(u,v)||_D.
  double gradient_norm = 0.0;
  /// Psi / ||(u,v)||_D^2.
  double nehari_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
  LevelDiagnostics levels;
  std::optional<Classification> classification;
  StatePair profiles;
  std::vector<TraceEntry> trace;
  /// Energies of the path nodes (mountain_pass only).
  std::vector<double> path_energies;
  /// Solver-specific scalar diagnostics (named, stable keys).
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
};

struct DescentOptions {
  double tol_grad = 1e-6;     // relative dual norm of J'
  double tol_nehari = 1e-10;  // relative Nehari residual
  int max_iterations = 4000;
  double initial_step = 1.0;
  double max_step = 1.0;  // <= 1 keeps iterates nonnegative
  double armijo = 1e-4;
  double min_step = 1e-10;
  bool record_trace = true;
};

/// Minimizes J_nu^+ on the Nehari manifold by Sobolev-preconditioned descent
/// with reprojection and backtracking. Non-convergence is reported
/// (converged = false), not thrown.
SolverReport ground_state(const ProblemParams& params, const StatePair& init,
                          const DescentOptions& opts = {});

/// Doubles nu from 1 until the projected coupling term nu (a+b) C exceeds half
/// of ||(u,v)||_D^2 at the projection of `probe`.
double escalate_coupling(const ProblemParams& params, const StatePair& probe,
                         double start = 1.0, int max_doublings = 60);

struct PathOptions {
  int nodes = 32;  // K; the path holds K + 1 pairs
  int max_sweeps = 300;
  double max_nu = 0.1;
  double initial_step = 0.5;
  double max_step = 1.0;  // larger steps overshoot in the Sobolev metric
  double min_step = 1e-8;
  double tol_energy = 1e-9;  // relative stall tolerance on c_MP
  int stall_sweeps = 8;
};

/// Discrete path t_k = k/K on the truncated Nehari manifold; nodes 0 and K
/// are the projected semi-trivial couples and never move. Interior node k stays
/// on the slice sigma1/(sigma1+sigma2) = fraction[k] fixed by the initial path,
/// so no node can jump across the ridge sigma1 = sigma2.
struct PathState {
  std::vector<StatePair> nodes;
  std::vector<double> energies;
  /// Scaling that put the initial path node onto the manifold.
  std::vector<double> gamma;
  std::vector<double> fraction;
};

/// Mountain-pass estimate between (z1, 0) and (0, z2) on the grid, starting
/// from the Nehari-rescaled path ((1-t)^(1/2) z1, t^(1/2) z2). Each sweep
/// lowers the arg-max node and its neighbours within their slices; c_MP is the
/// largest node energy and never increases.
SolverReport mountain_pass(const ProblemParams& params, GridPtr grid,
                           const PathOptions& opts = {}, PathState* final_path = nullptr);

enum class SemitrivialBranch { First, Second };

struct ProbeOptions {
  /// Amplitudes of the directed paths (t f(t) phi, f(t) z).
  std::vector<double> ladder = {1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3,
                                1e-3, 3.1622776601683794e-4, 1e-4};
  int bump_directions = 4;
  int random_perturbations = 8;
  double perturbation_amplitude = 1e-2;
  /// Allowed gap between the measured and the predicted leading exponent.
  double exponent_tolerance = 0.3;
  std::uint64_t seed = 12345;
  DescentOptions base_descent{};
};

struct DirectedProbe {
  std::string direction;
  std::vector<double> amplitudes;
  std::vector<double> energy_gaps;  // J(path(t)) - J(base)
  double leading_exponent = 0.0;
  std::string verdict;  // raises | lowers | unresolved
};

/// Classifies a semi-trivial couple on the Nehari manifold from directed paths
/// and random reprojected perturbations. Inconclusive is returned rather than
/// a label the probes cannot support.
SolverReport semitrivial_probe(const ProblemParams& params, GridPtr grid,
                               SemitrivialBranch which, const ProbeOptions& opts = {},
                               std::vector<DirectedProbe>* details = nullptr);

}  // namespace hsc
