#include "hsc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "hsc/error.hpp"

namespace hsc {

namespace {

constexpr Nonlinearity kPositive = Nonlinearity::PositivePart;
constexpr double kProjectionTol = 1e-13;
constexpr const char* kRadialNote =
    "h is restricted to radial profiles; all states are computed in the radial ansatz";

double relative_residual(const EnergyModel& model, const StatePair& x, Nonlinearity nl) {
  const NehariTerms t = model.nehari_terms(x, nl);
  const ProblemParams& prm = model.params();
  return (t.norm_sq - t.critical - prm.nu * (prm.alpha + prm.beta) * t.coupling) / t.norm_sq;
}

double relative_gradient(const EnergyModel& model, const StatePair& x, Nonlinearity nl) {
  return model.sobolev_gradient(x, nl).dual_norm / std::sqrt(model.norm_sq(x));
}

SolverReport blank_report(SolverKind kind, const ProblemParams& params) {
  SolverReport rep;
  rep.kind = kind;
  rep.params = params;
  rep.levels = LevelDiagnostics::of(params);
  rep.notes.emplace_back(kRadialNote);
  return rep;
}

// Mean of log10 r weighted by the critical integrands of both components.
double log10_radius(const EnergyModel& model, const StatePair& x) {
  const RadialGrid& g = *model.grid();
  const double p = model.params().critical_exponent();
  const double s = model.params().s;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes()[i];
    const double f = g.weights()[i] * std::pow(r, -s) *
                     (std::pow(std::max(x.u[i], 0.0), p) + std::pow(std::max(x.v[i], 0.0), p));
    num += f * std::log10(r);
    den += f;
  }
  return den > 0.0 ? num / den : 0.0;
}

void fill_state(SolverReport& rep, const EnergyModel& model, const StatePair& x) {
  const EnergyBreakdown b = model.breakdown(x, kPositive);
  rep.profiles = x;
  rep.energy = b.total;
  rep.gradient_norm = relative_gradient(model, x, kPositive);
  rep.nehari_residual = relative_residual(model, x, kPositive);
  rep.metrics["critical_u"] = b.hs_u;
  rep.metrics["critical_v"] = b.hs_v;
  rep.metrics["coupling"] = b.coupling;
  rep.metrics["log10_radius"] = log10_radius(model, x);
}

// Smooth bump exp(-1/(1 - xi^2)) in xi = (log r - center)/width, zero outside |xi| < 1.
RadialFunction log_bump(const GridPtr& grid, double center, double width) {
  return RadialFunction::sample(grid, [center, width](double r) {
    const double xi = (std::log(r) - center) / width;
    return std::abs(xi) < 1.0 ? std::exp(-1.0 / (1.0 - xi * xi)) : 0.0;
  });
}

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::GroundState: return "ground_state";
    case SolverKind::MountainPass: return "mountain_pass";
    case SolverKind::SemitrivialProbe: return "semitrivial_probe";
  }
  return "unknown";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::LocalMin: return "local_min";
    case Classification::Saddle: return "saddle";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

LevelDiagnostics LevelDiagnostics::of(const ProblemParams& params) {
  LevelDiagnostics d;
  d.level1 = critical_level(params.N, params.lambda1, params.s);
  d.level2 = critical_level(params.N, params.lambda2, params.s);
  d.min_level = std::min(d.level1, d.level2);
  d.sum_level = d.level1 + d.level2;
  return d;
}

SolverReport ground_state(const ProblemParams& params, const StatePair& init,
                          const DescentOptions& opts) {
  if (init.is_zero()) throw Error(ErrorKind::DegenerateInput, "ground_state: init is (0, 0)");
  const StatePair start = init.positive_part();
  if (start.is_zero()) {
    throw Error(ErrorKind::DegenerateInput, "ground_state: init has no positive part");
  }
  const EnergyModel model(init.grid(), params);
  SolverReport rep = blank_report(SolverKind::GroundState, params);

  StatePair x = project(model, start, kProjectionTol, kPositive).projected;
  double energy = model.total(x, kPositive);
  double step = std::min(opts.initial_step, opts.max_step);
  int it = 0;
  rep.status = "max_iterations";
  for (;; ++it) {
    const auto sg = model.sobolev_gradient(x, kPositive);
    const double rel = sg.dual_norm / std::sqrt(model.norm_sq(x));
    const double res = relative_residual(model, x, kPositive);
    if (opts.record_trace) rep.trace.push_back({it, energy, rel, step});
    if (rel <= opts.tol_grad && std::abs(res) <= opts.tol_nehari) {
      rep.converged = true;
      rep.status = "converged";
      break;
    }
    if (it >= opts.max_iterations) break;

    const double slope = sg.dual_norm * sg.dual_norm;
    bool accepted = false;
    while (step >= opts.min_step) {
      const StatePair trial = x.axpy(-step, sg.direction).positive_part();
      if (!trial.is_zero()) {
        const ProjectionResult pr = project(model, trial, kProjectionTol, kPositive);
        const double e = model.total(pr.projected, kPositive);
        if (e <= energy - opts.armijo * step * slope) {
          x = pr.projected;
          energy = e;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.status = "line_search_stalled";
      break;
    }
    step = std::min(opts.max_step, 2.0 * step);
  }
  rep.iterations = it;
  fill_state(rep, model, x);

  const RadialGrid& grid = *model.grid();
  const double centre = rep.metrics["log10_radius"];
  if (centre < std::log10(grid.r_min()) + 1.0 || centre > std::log10(grid.r_max()) - 1.0) {
    rep.notes.emplace_back(
        "mass has drifted to within a decade of the grid boundary; no interior state was "
        "resolved (a dilation keeps lowering the energy)");
  }

  const bool below = rep.energy < rep.levels.min_level;
  rep.metrics["below_min_level"] = below ? 1.0 : 0.0;
  const double cu = rep.metrics["critical_u"];
  const double cv = rep.metrics["critical_v"];
  const double scale = cu + cv;
  if (cu > 1e-12 * scale && cv > 1e-12 * scale) {
    rep.notes.emplace_back(below ? "coupled state below both semi-trivial levels"
                                 : "coupled state not below min semi-trivial level");
  } else {
    rep.notes.emplace_back(
        "semi-trivial minimizer; consistent with the small-coupling ground-state regime, "
        "global minimality not certified");
  }
  return rep;
}

double escalate_coupling(const ProblemParams& params, const StatePair& probe, double start,
                         int max_doublings) {
  if (!(start > 0.0)) throw Error(ErrorKind::InvalidParameter, "escalate_coupling: start must be > 0");
  const double q = params.alpha + params.beta;
  double nu = start;
  for (int k = 0; k <= max_doublings; ++k, nu *= 2.0) {
    ProblemParams p = params;
    p.nu = nu;
    const EnergyModel model(probe.grid(), p);
    const StatePair x = project(model, probe, kProjectionTol, kPositive).projected;
    const NehariTerms t = model.nehari_terms(x, kPositive);
    if (!(t.coupling > 0.0)) {
      throw Error(ErrorKind::DegenerateInput, "escalate_coupling: probe has no coupling overlap");
    }
    if (nu * q * t.coupling > 0.5 * t.norm_sq) return nu;
  }
  throw Error(ErrorKind::NoProjection, "escalate_coupling: coupling never dominated");
}

namespace {

double critical_integral(const RadialFunction& f, const std::vector<double>& hs_weight, double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < hs_weight.size(); ++i) {
    if (f[i] > 0.0) sum += hs_weight[i] * std::pow(f[i], p);
  }
  return sum;
}

// Sobolev gradient with the component that changes sigma1/(sigma1+sigma2) removed.
StatePair slice_direction(const EnergyModel& model, const StatePair& x,
                          const std::vector<double>& hs_weight, double p) {
  const StatePair d = model.sobolev_gradient(x, kPositive).direction;
  const double s1 = critical_integral(x.u, hs_weight, p);
  const double s2 = critical_integral(x.v, hs_weight, p);
  const double total = s1 + s2;
  const std::size_t n = hs_weight.size();
  std::vector<double> gu(n, 0.0), gv(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x.u[i] > 0.0) gu[i] = s2 / (total * total) * hs_weight[i] * p * std::pow(x.u[i], p - 1.0);
    if (x.v[i] > 0.0) gv[i] = -s1 / (total * total) * hs_weight[i] * p * std::pow(x.v[i], p - 1.0);
  }
  const std::vector<double> cu = model.metric(0).solve(gu);
  const std::vector<double> cv = model.metric(1).solve(gv);
  double g_d = 0.0, g_c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g_d += gu[i] * d.u[i] + gv[i] * d.v[i];
    g_c += gu[i] * cu[i] + gv[i] * cv[i];
  }
  if (!(g_c > 0.0)) return d;
  const StatePair c(RadialFunction(model.grid(), cu), RadialFunction(model.grid(), cv));
  return d.axpy(-g_d / g_c, c);
}

// Rescales u so that sigma1/(sigma1+sigma2) equals `fraction`.
std::optional<StatePair> onto_slice(const StatePair& x, double fraction,
                                    const std::vector<double>& hs_weight, double p) {
  const double s1 = critical_integral(x.u, hs_weight, p);
  const double s2 = critical_integral(x.v, hs_weight, p);
  if (!(s1 > 0.0) || !(s2 > 0.0)) return std::nullopt;
  const double a = std::pow(fraction * s2 / ((1.0 - fraction) * s1), 1.0 / p);
  return StatePair(x.u.scaled(a), x.v);
}

}  // namespace

SolverReport mountain_pass(const ProblemParams& params, GridPtr grid, const PathOptions& opts,
                           PathState* final_path) {
  params.validate();
  const SeparabilityCheck sep = separability_check(params);
  const bool case_i = sep.cond_i && params.alpha >= 2.0;
  const bool case_ii = sep.cond_ii && params.beta >= 2.0;
  if (!case_i && !case_ii) {
    throw Error(ErrorKind::Precondition,
                "mountain_pass needs separated levels with alpha >= 2 (or beta >= 2 mirrored)");
  }
  if (params.nu > opts.max_nu) {
    throw Error(ErrorKind::Precondition, "mountain_pass needs nu <= " + std::to_string(opts.max_nu));
  }
  if (opts.nodes < 4) throw Error(ErrorKind::InvalidParameter, "mountain_pass needs K >= 4");

  const EnergyModel model(grid, params);
  SolverReport rep = blank_report(SolverKind::MountainPass, params);
  rep.notes.emplace_back(case_i ? "separation case i" : "separation case ii");

  const int K = opts.nodes;
  const RadialFunction z1 = exact_solution(grid, params.lambda1, params.s);
  const RadialFunction z2 = exact_solution(grid, params.lambda2, params.s);

  // g(t) from the discrete norms and critical integrals of z1, z2.
  const double p = params.critical_exponent();
  const double kappa = (2.0 - params.s) / (2.0 * (params.N - params.s));
  const double a1 = lambda_norm_sq(z1, params.lambda1);
  const double a2 = lambda_norm_sq(z2, params.lambda2);
  const double b1 = weighted_lp(*grid, z1, p, params.s);
  const double b2 = weighted_lp(*grid, z2, p, params.s);
  auto g = [&](double t) {
    const double a = (1.0 - t) * a1 + t * a2;
    const double b = std::pow(1.0 - t, p / 2.0) * b1 + std::pow(t, p / 2.0) * b2;
    return kappa * std::pow(a, p / (p - 2.0)) * std::pow(b, -2.0 / (p - 2.0));
  };

  std::vector<double> hs_weight(grid->size());
  for (std::size_t i = 0; i < hs_weight.size(); ++i) {
    hs_weight[i] = grid->weights()[i] * std::pow(grid->nodes()[i], -params.s);
  }

  PathState path;
  double g_max = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double t = static_cast<double>(k) / K;
    const StatePair psi(z1.scaled(std::sqrt(1.0 - t)), z2.scaled(std::sqrt(t)));
    const ProjectionResult pr = project(model, psi, kProjectionTol, kPositive);
    path.nodes.push_back(pr.projected);
    path.gamma.push_back(pr.t_star);
    const double s1 = critical_integral(pr.projected.u, hs_weight, p);
    const double s2 = critical_integral(pr.projected.v, hs_weight, p);
    path.fraction.push_back(s1 / (s1 + s2));
    path.energies.push_back(model.total(pr.projected, kPositive));
    g_max = std::max(g_max, g(t));
  }
  const double end_energy = std::max(path.energies.front(), path.energies.back());
  auto argmax = [&] {
    return static_cast<int>(std::max_element(path.energies.begin() + 1, path.energies.end() - 1) -
                            path.energies.begin());
  };

  int kmax = argmax();
  rep.metrics["initial_path_max"] = path.energies[kmax];
  rep.metrics["g_half"] = g(0.5);
  rep.metrics["g_max"] = g_max;
  rep.metrics["endpoint_energy_first"] = path.energies.front();
  rep.metrics["endpoint_energy_second"] = path.energies.back();
  rep.trace.push_back(
      {0, path.energies[kmax], relative_gradient(model, path.nodes[kmax], kPositive), 0.0});

  std::vector<double> steps(K + 1, opts.initial_step);
  double previous = path.energies[kmax];
  int stalled = 0;
  int sweep = 1;
  rep.status = "max_sweeps";
  for (; sweep <= opts.max_sweeps; ++sweep) {
    kmax = argmax();
    if (!(path.energies[kmax] > end_energy)) {
      throw Error(ErrorKind::DegeneratePath, "path maximum collapsed onto an endpoint level");
    }
    std::set<int> active;
    for (int k = kmax - 1; k <= kmax + 1; ++k) active.insert(std::clamp(k, 1, K - 1));

    int moved = 0;
    for (int k : active) {
      const StatePair& node = path.nodes[k];
      const StatePair d = slice_direction(model, node, hs_weight, p);

      double h = steps[k];
      bool accepted = false;
      while (h >= opts.min_step) {
        const auto trial = onto_slice(node.axpy(-h, d).positive_part(), path.fraction[k], hs_weight, p);
        if (trial) {
          const ProjectionResult pr = project(model, *trial, kProjectionTol, kPositive);
          const double e = model.total(pr.projected, kPositive);
          if (e < path.energies[k]) {
            path.nodes[k] = pr.projected;
            path.energies[k] = e;
            accepted = true;
            break;
          }
        }
        h *= 0.5;
      }
      if (accepted) {
        ++moved;
        steps[k] = std::min(opts.max_step, 2.0 * h);
      } else {
        steps[k] = opts.initial_step;
      }
    }

    kmax = argmax();
    const double c = path.energies[kmax];
    rep.trace.push_back(
        {sweep, c, relative_gradient(model, path.nodes[kmax], kPositive), steps[kmax]});
    if (moved == 0) {
      rep.converged = true;
      rep.status = "no_descent_step";
      break;
    }
    stalled = (previous - c <= opts.tol_energy * std::abs(c)) ? stalled + 1 : 0;
    previous = c;
    if (stalled >= opts.stall_sweeps) {
      rep.converged = true;
      rep.status = "stalled";
      break;
    }
  }
  kmax = argmax();
  if (!(path.energies[kmax] > end_energy)) {
    throw Error(ErrorKind::DegeneratePath, "path maximum collapsed onto an endpoint level");
  }
  rep.iterations = std::min(sweep, opts.max_sweeps);
  fill_state(rep, model, path.nodes[kmax]);
  rep.metrics["argmax_t"] = static_cast<double>(kmax) / K;
  rep.path_energies = path.energies;
  if (final_path != nullptr) *final_path = std::move(path);
  return rep;
}

namespace {

struct ProbeGeometry {
  double base_norm_sq;      // ||z||^2 of the semi-trivial component
  double base_critical;     // its critical integral
  double p;                 // 2*_s
  double q;                 // alpha + beta
  double kappa;             // (2-s)/(2(N-s))
  double nu;
  double exponent;          // exponent of the perturbed component in the coupling
};

// J(f t phi, f z) - J(z, 0) along the directed path, where f(t) solves the
// Nehari identity. Computed through expm1 so that small gaps keep their digits.
double directed_gap(const ProbeGeometry& g, double a_phi, double b_phi, double c, double t) {
  const double bz = g.base_critical;
  const double e1 = std::pow(t, g.p) * b_phi / bz;
  const double e2 = g.nu * g.q * std::pow(t, g.exponent) * c / bz;
  const double e3 = t * t * a_phi / bz;
  const double delta = g.base_norm_sq / bz - 1.0;
  // Solve expm1((p-2)x)(1+e1) + e1 + e2 exp((q-2)x) - e3 - delta = 0 for x = log f.
  double x = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double ep = std::expm1((g.p - 2.0) * x);
    const double eq = std::exp((g.q - 2.0) * x);
    const double val = ep * (1.0 + e1) + e1 + e2 * eq - e3 - delta;
    const double der = (g.p - 2.0) * (ep + 1.0) * (1.0 + e1) + (g.q - 2.0) * e2 * eq;
    const double dx = val / der;
    x -= dx;
    if (std::abs(dx) <= 1e-17 * (1.0 + std::abs(x))) break;
  }
  const double gap = g.kappa * (std::expm1(g.p * x) * (1.0 + e1) + e1) +
                     (g.q - 2.0) / (2.0 * g.q) * e2 * std::exp(g.q * x) - 0.5 * delta;
  return gap * bz;
}

}  // namespace

SolverReport semitrivial_probe(const ProblemParams& params, GridPtr grid, SemitrivialBranch which,
                               const ProbeOptions& opts, std::vector<DirectedProbe>* details) {
  params.validate();
  if (opts.ladder.size() < 2) {
    throw Error(ErrorKind::InvalidParameter, "probe ladder needs at least two amplitudes");
  }
  const bool first = which == SemitrivialBranch::First;
  const EnergyModel model(grid, params);
  SolverReport rep = blank_report(SolverKind::SemitrivialProbe, params);
  rep.notes.emplace_back(first ? "probing (z1, 0)" : "probing (0, z2)");

  const double lam_base = first ? params.lambda1 : params.lambda2;
  const double lam_other = first ? params.lambda2 : params.lambda1;
  const RadialFunction zero(grid);
  const RadialFunction z = exact_solution(grid, lam_base, params.s);
  const StatePair seed_pair = first ? StatePair(z, zero) : StatePair(zero, z);

  const SolverReport base = ground_state(params, seed_pair, opts.base_descent);
  const StatePair& base_pair = base.profiles;
  const RadialFunction& zb = first ? base_pair.u : base_pair.v;
  rep.iterations = base.iterations;
  rep.converged = base.converged;
  fill_state(rep, model, base_pair);
  if (!base.converged) {
    rep.notes.emplace_back("base couple did not reach the gradient tolerance (" + base.status +
                           "); directed paths are unaffected to first order");
  }

  ProbeGeometry geo{};
  geo.base_norm_sq = lambda_norm_sq(zb, lam_base);
  geo.base_critical = weighted_lp(*grid, zb, params.critical_exponent(), params.s);
  geo.p = params.critical_exponent();
  geo.q = params.alpha + params.beta;
  geo.kappa = (2.0 - params.s) / (2.0 * (params.N - params.s));
  geo.nu = params.nu;
  geo.exponent = first ? params.beta : params.alpha;
  const double predicted = std::min(geo.exponent, 2.0);
  const double resolution = 1e-13 * geo.base_critical;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> center(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> width(0.5, 2.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Family (b): directed paths along the other extremal profile and smooth bumps.
  std::vector<std::pair<std::string, RadialFunction>> directions;
  directions.emplace_back("profile", exact_solution(grid, lam_other, params.s));
  for (int j = 0; j < opts.bump_directions; ++j) {
    const double c0 = center(rng);
    const double w0 = width(rng);
    directions.emplace_back("bump" + std::to_string(j), log_bump(grid, c0, w0));
  }

  int lowers = 0;
  int raises = 0;
  int unresolved = 0;
  std::vector<DirectedProbe> probes;
  for (auto& [name, phi_raw] : directions) {
    const double n2 = lambda_norm_sq(phi_raw, lam_other);
    const RadialFunction phi = phi_raw.scaled(std::sqrt(geo.base_critical / n2));
    const double a_phi = lambda_norm_sq(phi, lam_other);
    const double b_phi = weighted_lp(*grid, phi, geo.p, params.s);
    const StatePair mixed = first ? StatePair(zb, phi) : StatePair(phi, zb);
    const double c = model.nehari_terms(mixed).coupling;

    DirectedProbe pr;
    pr.direction = name;
    pr.amplitudes = opts.ladder;
    for (double t : opts.ladder) pr.energy_gaps.push_back(directed_gap(geo, a_phi, b_phi, c, t));

    const std::size_t m = pr.energy_gaps.size();
    const double d_last = pr.energy_gaps[m - 1];
    const double d_prev = pr.energy_gaps[m - 2];
    if (d_last * d_prev > 0.0) {
      pr.leading_exponent = std::log(std::abs(d_last / d_prev)) /
                            std::log(pr.amplitudes[m - 1] / pr.amplitudes[m - 2]);
    } else {
      pr.leading_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    if (d_last < -resolution && d_prev < -resolution) {
      pr.verdict = "lowers";
      ++lowers;
    } else if (d_last > resolution && d_prev > resolution &&
               std::abs(pr.leading_exponent - predicted) <= opts.exponent_tolerance) {
      pr.verdict = "raises";
      ++raises;
    } else {
      pr.verdict = "unresolved";
      ++unresolved;
    }
    probes.push_back(std::move(pr));
  }

  // Family (a): random reprojected perturbations, energy compared directly.
  const double base_energy = model.total(base_pair);
  const double base_norm = std::sqrt(geo.base_norm_sq);
  int a_lowers = 0;
  int a_raises = 0;
  for (int j = 0; j < opts.random_perturbations; ++j) {
    RadialFunction phi = log_bump(grid, center(rng), width(rng));
    RadialFunction psi = log_bump(grid, center(rng), width(rng));
    const double sign = unit(rng);
    phi = phi.scaled(opts.perturbation_amplitude * base_norm /
                     std::sqrt(lambda_norm_sq(phi, lam_other)));
    psi = psi.scaled(sign * opts.perturbation_amplitude * base_norm /
                     std::sqrt(lambda_norm_sq(psi, lam_base)));
    const RadialFunction moved = zb.axpy(1.0, psi);
    const StatePair trial = first ? StatePair(moved, phi) : StatePair(phi, moved);
    const StatePair on = project(model, trial, kProjectionTol).projected;
    const double gap = model.total(on) - base_energy;
    const double noise = 1e-11 * std::abs(base_energy);
    if (gap < -noise) {
      ++a_lowers;
    } else if (gap > noise) {
      ++a_raises;
    }
  }

  if (lowers > 0 || a_lowers > 0) {
    rep.classification = Classification::Saddle;
  } else if (unresolved == 0 && a_raises == opts.random_perturbations) {
    rep.classification = Classification::LocalMin;
  } else {
    rep.classification = Classification::Inconclusive;
  }
  rep.metrics["directed_lowers"] = lowers;
  rep.metrics["directed_raises"] = raises;
  rep.metrics["directed_unresolved"] = unresolved;
  rep.metrics["random_lowers"] = a_lowers;
  rep.metrics["random_raises"] = a_raises;
  rep.metrics["predicted_exponent"] = predicted;
  rep.metrics["semitrivial_level"] = first ? rep.levels.level1 : rep.levels.level2;
  if (details != nullptr) *details = std::move(probes);
  return rep;
}

}  // namespace hsc
