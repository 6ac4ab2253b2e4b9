#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "hsc/error.hpp"
#include "hsc/io.hpp"
#include "hsc/nehari.hpp"

namespace hsc::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class FieldErrors {
 public:
  void add(const std::string& field) { fields_.push_back(field); }
  void raise_if_any(const std::string& what) const {
    if (fields_.empty()) return;
    std::string msg = what + ":";
    for (const auto& f : fields_) msg += " " + f;
    throw Error(ErrorKind::InvalidParameter, msg);
  }

 private:
  std::vector<std::string> fields_;
};

template <typename T>
void take(const json& j, const char* key, T& out, FieldErrors& bad, const std::string& prefix) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad.add(prefix + key);
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, FieldErrors& bad,
                    const std::string& prefix) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) bad.add(prefix + key + " (unknown)");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorKind::InvalidParameter, "not a number list: '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::DegeneratePath:
    case ErrorKind::NoProjection: return kExitNonConvergence;
    default: return kExitValidation;
  }
}

RadialFunction perturbed_profile(const GridPtr& grid, double lambda, double s, double amplitude) {
  const RadialFunction z = exact_solution(grid, lambda, s);
  if (amplitude == 0.0) return z;
  const RadialFunction bump = RadialFunction::sample(grid, [](double r) {
    const double t = std::log(r) - 0.5;
    return std::exp(-t * t);
  });
  return z.axpy(amplitude * z.max_abs(), bump);
}

StatePair initial_pair(const RunConfig& cfg, const GridPtr& grid) {
  // A CSV carries its own grid and takes precedence over the configured one.
  if (!cfg.profiles.empty()) return read_profiles_csv(cfg.profiles, cfg.params.N);
  const ProblemParams& p = cfg.params;
  const RadialFunction zero(grid);
  const RadialFunction u = perturbed_profile(grid, p.lambda1, p.s, cfg.perturbation);
  const RadialFunction v = perturbed_profile(grid, p.lambda2, p.s, cfg.perturbation);
  if (cfg.init == "first") return {u, zero};
  if (cfg.init == "second") return {zero, v};
  return {u, v};
}

void persist(const SolverReport& rep, const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = next_run_dir(cfg.output_dir);
  write_json(dir / "config.json", to_json(cfg));
  write_json(dir / "report.json", hsc::to_json(rep));
  write_profiles_csv(dir / "profiles.csv", rep.profiles);
  json summary{{"run_dir", dir.string()},
               {"kind", to_string(rep.kind)},
               {"energy", rep.energy},
               {"gradient_norm", rep.gradient_norm},
               {"nehari_residual", rep.nehari_residual},
               {"converged", rep.converged},
               {"status", rep.status}};
  if (rep.classification) summary["classification"] = to_string(*rep.classification);
  out << summary.dump(2) << '\n';
}

// Overrides collected from flags; only the ones given on the command line apply.
struct Overrides {
  std::string config;
  std::optional<int> N;
  std::optional<double> s, lambda, lambda1, lambda2, alpha, beta, nu;
  std::optional<std::string> h;
  std::optional<double> h_c, h_p, h_q;
  std::optional<double> r_min, r_max;
  std::optional<std::size_t> nodes;
  std::optional<double> tol_grad, tol_nehari;
  std::optional<int> max_iterations, path_nodes, max_sweeps;
  std::optional<double> max_nu;
  std::optional<std::string> ladder;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir, which, init, profiles;
  std::optional<double> perturbation;
  bool small_nu = false;
  std::optional<int> workers;
  std::optional<double> A, B, theta;
  std::optional<std::string> eps;
  std::optional<std::string> mode;
  std::vector<std::string> axes;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON run configuration");
  app->add_option("--N", o.N, "dimension N >= 3");
  app->add_option("--s", o.s, "singularity exponent s in [0, 2)");
  app->add_option("--lambda", o.lambda, "sets lambda1 and lambda2");
  app->add_option("--lambda1", o.lambda1);
  app->add_option("--lambda2", o.lambda2);
  app->add_option("--alpha", o.alpha);
  app->add_option("--beta", o.beta);
  app->add_option("--nu", o.nu);
  app->add_option("--h-profile", o.h, "coupling weight: constant | bump");
  app->add_option("--h-c", o.h_c);
  app->add_option("--h-p", o.h_p);
  app->add_option("--h-q", o.h_q);
  app->add_option("--r-min", o.r_min);
  app->add_option("--r-max", o.r_max);
  app->add_option("--nodes", o.nodes, "grid nodes");
  app->add_option("--tol-grad", o.tol_grad);
  app->add_option("--tol-nehari", o.tol_nehari);
  app->add_option("--max-iter", o.max_iterations);
  app->add_option("--path-nodes", o.path_nodes);
  app->add_option("--max-sweeps", o.max_sweeps);
  app->add_option("--max-nu", o.max_nu);
  app->add_option("--ladder", o.ladder, "comma-separated probe amplitudes");
  app->add_option("--seed", o.seed);
  app->add_option("--output-dir", o.output_dir);
  app->add_option("--which", o.which, "probe target: first | second");
  app->add_option("--init", o.init, "ground-state init: first | second | both");
  app->add_option("--perturb", o.perturbation, "relative bump added to initial profiles");
  app->add_option("--profiles", o.profiles, "r,u,v CSV");
  app->add_flag("--small-nu", o.small_nu, "assume hypothesis (H1): nu sufficiently small");
  app->add_option("--workers", o.workers);
  app->add_option("--A", o.A);
  app->add_option("--B", o.B);
  app->add_option("--theta", o.theta);
  app->add_option("--eps", o.eps, "comma-separated epsilons for the lemma threshold");
  app->add_option("--mode", o.mode, "sweep mode: classify | lemma");
  app->add_option("--axis", o.axes, "sweep axis name=v1,v2,...");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) cfg = config_from_json(read_json(o.config));
  ProblemParams& p = cfg.params;
  if (o.N) {
    p.N = *o.N;
    cfg.lemma.N = *o.N;
  }
  if (o.s) {
    p.s = *o.s;
    cfg.lemma.s = *o.s;
  }
  if (o.lambda) p.lambda1 = p.lambda2 = *o.lambda;
  if (o.lambda1) p.lambda1 = *o.lambda1;
  if (o.lambda2) p.lambda2 = *o.lambda2;
  if (o.alpha) p.alpha = *o.alpha;
  if (o.beta) p.beta = *o.beta;
  if (o.nu) {
    p.nu = *o.nu;
    cfg.lemma.nu = *o.nu;
  }
  if (o.h) {
    if (*o.h == "constant") {
      p.h = HProfile::constant(o.h_c.value_or(1.0));
    } else if (*o.h == "bump") {
      p.h = HProfile::bump(o.h_p.value_or(1.0), o.h_q.value_or(1.0));
    } else {
      throw Error(ErrorKind::InvalidParameter, "--h-profile must be constant or bump");
    }
  } else if (o.h_c || o.h_p || o.h_q) {
    if (p.h.kind == HProfile::Kind::Constant) {
      p.h.c = o.h_c.value_or(p.h.c);
    } else {
      p.h.p = o.h_p.value_or(p.h.p);
      p.h.q = o.h_q.value_or(p.h.q);
    }
  }
  if (o.r_min) cfg.grid.r_min = *o.r_min;
  if (o.r_max) cfg.grid.r_max = *o.r_max;
  if (o.nodes) cfg.grid.n_nodes = *o.nodes;
  if (o.tol_grad) cfg.descent.tol_grad = *o.tol_grad;
  if (o.tol_nehari) cfg.descent.tol_nehari = *o.tol_nehari;
  if (o.max_iterations) cfg.descent.max_iterations = *o.max_iterations;
  if (o.path_nodes) cfg.path.nodes = *o.path_nodes;
  if (o.max_sweeps) cfg.path.max_sweeps = *o.max_sweeps;
  if (o.max_nu) cfg.path.max_nu = *o.max_nu;
  if (o.ladder) cfg.probe.ladder = parse_list(*o.ladder);
  if (o.seed) cfg.seed = *o.seed;
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.which) cfg.which = *o.which;
  if (o.init) cfg.init = *o.init;
  if (o.perturbation) cfg.perturbation = *o.perturbation;
  if (o.profiles) cfg.profiles = *o.profiles;
  if (o.small_nu) cfg.small_nu = true;
  if (o.workers) cfg.workers = *o.workers;
  if (o.A) cfg.lemma.A = *o.A;
  if (o.B) cfg.lemma.B = *o.B;
  if (o.theta) cfg.lemma.theta = *o.theta;
  if (o.eps) cfg.lemma_eps = parse_list(*o.eps);
  if (o.mode) cfg.sweep_mode = *o.mode;
  if (!o.axes.empty()) {
    cfg.sweep_axes.clear();
    for (const auto& a : o.axes) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::InvalidParameter, "--axis expects name=v1,v2,...");
      }
      cfg.sweep_axes.emplace_back(a.substr(0, eq), parse_list(a.substr(eq + 1)));
    }
  }
  cfg.probe.seed = cfg.seed;
  return cfg;
}

// ---- sweep -----------------------------------------------------------------

void set_axis(RunConfig& cfg, const std::string& name, double value) {
  ProblemParams& p = cfg.params;
  LemmaInstance& l = cfg.lemma;
  if (name == "N") {
    p.N = static_cast<int>(std::lround(value));
    l.N = p.N;
  } else if (name == "s") {
    p.s = l.s = value;
  } else if (name == "lambda1") {
    p.lambda1 = value;
  } else if (name == "lambda2") {
    p.lambda2 = value;
  } else if (name == "alpha") {
    p.alpha = value;
  } else if (name == "beta") {
    p.beta = value;
  } else if (name == "nu") {
    p.nu = l.nu = value;
  } else if (name == "A") {
    l.A = value;
  } else if (name == "B") {
    l.B = value;
  } else if (name == "theta") {
    l.theta = value;
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown sweep axis '" + name + "'");
  }
}

std::string cases_of(const std::vector<RegimeBranch>& branches) {
  std::string out;
  for (const auto& b : branches) {
    if (!b.applicable) continue;
    if (!out.empty()) out += "+";
    out += b.case_label.empty() ? "yes" : b.case_label;
  }
  return out.empty() ? "-" : out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_row(const RunConfig& cfg) {
  if (cfg.sweep_mode == "classify") {
    const RegimeReport r = classify(cfg.params);
    const SeparabilityCheck sep = separability_check(cfg.params);
    std::string row;
    row += r.subcritical ? "1," : "0,";
    row += r.critical ? "1," : "0,";
    row += r.boundary ? "1," : "0,";
    row += (r.thm_1_1.applicable ? "yes," : "-,");
    row += cases_of(r.thm_1_2) + ",";
    row += (r.thm_1_3.applicable ? r.thm_1_3.case_label : std::string("-")) + ",";
    row += cases_of(r.thm_1_5) + ",";
    row += std::string(sep.cond_i ? "1" : "0") + "," + (sep.cond_ii ? "1" : "0");
    return row;
  }
  cfg.lemma.validate();
  const SigmaGrid grid = SigmaGrid::around(cfg.lemma);
  const auto inf = algebraic_inf(cfg.lemma, grid);
  const double ref = cfg.lemma.reference_level();
  return (inf ? format_double(*inf) : std::string("none")) + "," + format_double(ref) + "," +
         (inf ? format_double(*inf / ref) : std::string("none"));
}

int run_sweep(const RunConfig& base, std::ostream& out) {
  if (base.sweep_mode != "classify" && base.sweep_mode != "lemma") {
    throw Error(ErrorKind::InvalidParameter, "sweep mode must be classify or lemma");
  }
  if (base.sweep_axes.empty()) throw Error(ErrorKind::InvalidParameter, "sweep needs at least one axis");
  std::size_t total = 1;
  for (const auto& [name, values] : base.sweep_axes) {
    if (values.empty()) throw Error(ErrorKind::InvalidParameter, "sweep axis '" + name + "' is empty");
    RunConfig probe = base;
    set_axis(probe, name, values.front());  // rejects unknown names up front
    total *= values.size();
  }

  std::vector<std::string> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      RunConfig cfg = base;
      std::size_t rest = job;
      std::string prefix;
      for (auto it = base.sweep_axes.rbegin(); it != base.sweep_axes.rend(); ++it) {
        const std::size_t k = rest % it->second.size();
        rest /= it->second.size();
        set_axis(cfg, it->first, it->second[k]);
        prefix = format_double(it->second[k]) + "," + prefix;
      }
      std::string result;
      try {
        result = sweep_row(cfg) + ",";
      } catch (const Error& e) {
        const int blanks = base.sweep_mode == "classify" ? 9 : 3;
        result = std::string(static_cast<std::size_t>(blanks), ',') + std::string(to_string(e.kind()));
      }
      rows[job] = prefix + result;
    }
  };
  const int workers = std::max(1, base.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const fs::path dir = next_run_dir(base.output_dir);
  write_json(dir / "config.json", to_json(base));
  std::ofstream csv(dir / "sweep.csv");
  for (const auto& [name, values] : base.sweep_axes) csv << name << ',';
  if (base.sweep_mode == "classify") {
    csv << "subcritical,critical,boundary,thm_1_1,thm_1_2,thm_1_3,thm_1_5,cond_i,cond_ii,error\n";
  } else {
    csv << "inf,reference,ratio,error\n";
  }
  for (const auto& r : rows) csv << r << '\n';
  out << json{{"run_dir", dir.string()}, {"rows", total}}.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig cfg) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidParameter, "config must be a JSON object");
  FieldErrors bad;
  reject_unknown(j,
                 {"params", "grid", "solver", "h_profile", "small_nu", "output_dir", "seed", "which",
                  "init", "perturbation", "profiles", "workers", "lemma", "sweep"},
                 bad, "");
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) {
      bad.add("params");
    } else {
      reject_unknown(p, {"N", "s", "lambda1", "lambda2", "alpha", "beta", "nu", "h"}, bad, "params.");
      take(p, "N", cfg.params.N, bad, "params.");
      take(p, "s", cfg.params.s, bad, "params.");
      take(p, "lambda1", cfg.params.lambda1, bad, "params.");
      take(p, "lambda2", cfg.params.lambda2, bad, "params.");
      take(p, "alpha", cfg.params.alpha, bad, "params.");
      take(p, "beta", cfg.params.beta, bad, "params.");
      take(p, "nu", cfg.params.nu, bad, "params.");
      if (p.contains("h")) {
        try {
          cfg.params.h = h_profile_from_json(p.at("h"));
        } catch (const std::exception&) {
          bad.add("params.h");
        }
      }
    }
  }
  if (j.contains("h_profile")) {
    try {
      cfg.params.h = h_profile_from_json(j.at("h_profile"));
    } catch (const std::exception&) {
      bad.add("h_profile");
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"r_min", "r_max", "n_nodes"}, bad, "grid.");
    take(g, "r_min", cfg.grid.r_min, bad, "grid.");
    take(g, "r_max", cfg.grid.r_max, bad, "grid.");
    take(g, "n_nodes", cfg.grid.n_nodes, bad, "grid.");
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s,
                   {"tol_grad", "tol_nehari", "max_iterations", "path_nodes", "max_sweeps", "max_nu",
                    "probe_ladder", "bump_directions", "random_perturbations"},
                   bad, "solver.");
    take(s, "tol_grad", cfg.descent.tol_grad, bad, "solver.");
    take(s, "tol_nehari", cfg.descent.tol_nehari, bad, "solver.");
    take(s, "max_iterations", cfg.descent.max_iterations, bad, "solver.");
    take(s, "path_nodes", cfg.path.nodes, bad, "solver.");
    take(s, "max_sweeps", cfg.path.max_sweeps, bad, "solver.");
    take(s, "max_nu", cfg.path.max_nu, bad, "solver.");
    take(s, "probe_ladder", cfg.probe.ladder, bad, "solver.");
    take(s, "bump_directions", cfg.probe.bump_directions, bad, "solver.");
    take(s, "random_perturbations", cfg.probe.random_perturbations, bad, "solver.");
  }
  take(j, "small_nu", cfg.small_nu, bad, "");
  std::string dir = cfg.output_dir.string();
  take(j, "output_dir", dir, bad, "");
  cfg.output_dir = dir;
  take(j, "seed", cfg.seed, bad, "");
  take(j, "which", cfg.which, bad, "");
  take(j, "init", cfg.init, bad, "");
  take(j, "perturbation", cfg.perturbation, bad, "");
  std::string prof = cfg.profiles.string();
  take(j, "profiles", prof, bad, "");
  cfg.profiles = prof;
  take(j, "workers", cfg.workers, bad, "");
  if (j.contains("lemma")) {
    const json& l = j.at("lemma");
    reject_unknown(l, {"A", "B", "theta", "s", "N", "nu", "eps"}, bad, "lemma.");
    take(l, "A", cfg.lemma.A, bad, "lemma.");
    take(l, "B", cfg.lemma.B, bad, "lemma.");
    take(l, "theta", cfg.lemma.theta, bad, "lemma.");
    take(l, "s", cfg.lemma.s, bad, "lemma.");
    take(l, "N", cfg.lemma.N, bad, "lemma.");
    take(l, "nu", cfg.lemma.nu, bad, "lemma.");
    take(l, "eps", cfg.lemma_eps, bad, "lemma.");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, {"mode", "axes"}, bad, "sweep.");
    take(s, "mode", cfg.sweep_mode, bad, "sweep.");
    if (s.contains("axes")) {
      cfg.sweep_axes.clear();
      if (!s.at("axes").is_object()) {
        bad.add("sweep.axes");
      } else {
        for (const auto& [name, values] : s.at("axes").items()) {
          try {
            cfg.sweep_axes.emplace_back(name, values.get<std::vector<double>>());
          } catch (const json::exception&) {
            bad.add("sweep.axes." + name);
          }
        }
      }
    }
  }
  bad.raise_if_any("malformed config fields");
  cfg.probe.seed = cfg.seed;
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json axes = json::object();
  for (const auto& [name, values] : cfg.sweep_axes) axes[name] = values;
  return {{"params", hsc::to_json(cfg.params)},
          {"grid", {{"r_min", cfg.grid.r_min}, {"r_max", cfg.grid.r_max}, {"n_nodes", cfg.grid.n_nodes}}},
          {"solver",
           {{"tol_grad", cfg.descent.tol_grad},
            {"tol_nehari", cfg.descent.tol_nehari},
            {"max_iterations", cfg.descent.max_iterations},
            {"path_nodes", cfg.path.nodes},
            {"max_sweeps", cfg.path.max_sweeps},
            {"max_nu", cfg.path.max_nu},
            {"probe_ladder", cfg.probe.ladder},
            {"bump_directions", cfg.probe.bump_directions},
            {"random_perturbations", cfg.probe.random_perturbations}}},
          {"small_nu", cfg.small_nu},
          {"output_dir", cfg.output_dir.string()},
          {"seed", cfg.seed},
          {"which", cfg.which},
          {"init", cfg.init},
          {"perturbation", cfg.perturbation},
          {"profiles", cfg.profiles.string()},
          {"workers", cfg.workers},
          {"lemma",
           {{"A", cfg.lemma.A},
            {"B", cfg.lemma.B},
            {"theta", cfg.lemma.theta},
            {"s", cfg.lemma.s},
            {"N", cfg.lemma.N},
            {"nu", cfg.lemma.nu},
            {"eps", cfg.lemma_eps}}},
          {"sweep", {{"mode", cfg.sweep_mode}, {"axes", axes}}}};
}

void validate(const RunConfig& cfg) {
  cfg.params.validate();
  FieldErrors bad;
  const ProblemParams& p = cfg.params;
  const bool constant_h = p.h.kind == HProfile::Kind::Constant;
  if (p.critical()) {
    if (constant_h && !cfg.small_nu) {
      bad.add("h_profile (alpha+beta=2*_s needs h vanishing at 0 and infinity, or small_nu)");
    }
  } else if (!p.subcritical()) {
    bad.add("params.alpha+params.beta (exceeds 2*_s)");
  }
  if (!(cfg.grid.r_min > 0.0 && cfg.grid.r_min < 1.0 && cfg.grid.r_max > 1.0)) bad.add("grid.r_min/grid.r_max");
  if (cfg.grid.n_nodes < 64) bad.add("grid.n_nodes");
  if (!(cfg.descent.tol_grad > 0.0)) bad.add("solver.tol_grad");
  if (!(cfg.descent.tol_nehari > 0.0)) bad.add("solver.tol_nehari");
  if (cfg.descent.max_iterations < 0) bad.add("solver.max_iterations");
  if (cfg.path.nodes < 4) bad.add("solver.path_nodes");
  if (cfg.path.max_sweeps < 0) bad.add("solver.max_sweeps");
  if (cfg.probe.ladder.size() < 2) bad.add("solver.probe_ladder");
  for (double t : cfg.probe.ladder) {
    if (!(t > 0.0 && t < 1.0)) {
      bad.add("solver.probe_ladder");
      break;
    }
  }
  if (cfg.which != "first" && cfg.which != "second") bad.add("which");
  if (cfg.init != "first" && cfg.init != "second" && cfg.init != "both") bad.add("init");
  if (cfg.workers < 1) bad.add("workers");
  bad.raise_if_any("invalid config");
}

GridPtr make_grid(const RunConfig& cfg) {
  return build_grid(cfg.params.N, cfg.grid.r_min, cfg.grid.r_max, cfg.grid.n_nodes);
}

fs::path next_run_dir(const fs::path& output_dir) {
  fs::create_directories(output_dir);
  long last = 0;
  for (const auto& entry : fs::directory_iterator(output_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("run-", 0) == 0 && name.size() == 10) {
      try {
        last = std::max(last, std::stol(name.substr(4)));
      } catch (const std::exception&) {
      }
    }
  }
  for (long id = last + 1;; ++id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run-%06ld", id);
    const fs::path dir = output_dir / buf;
    if (fs::create_directory(dir)) return dir;
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hardy-Sobolev coupled system toolkit"};
  app.require_subcommand(1);
  Overrides o;
  const char* names[] = {"constants", "evaluate", "project",  "ground-state", "mountain-pass",
                         "probe",     "classify", "lemma",    "sweep"};
  const char* help[] = {"closed-form constants and levels",
                        "energy breakdown of CSV profiles",
                        "Nehari projection of CSV profiles",
                        "ground state by projected descent",
                        "mountain-pass path estimate",
                        "classify a semi-trivial couple",
                        "existence-regime report",
                        "algebraic lemma oracle",
                        "classify/lemma over a parameter grid"};
  for (int k = 0; k < 9; ++k) add_common(app.add_subcommand(names[k], help[k]), o);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitValidation;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    const RunConfig cfg = resolve(o);
    if (cmd == "constants") {
      // Only N, s and the lambdas matter here; the exponents are not checked.
      const ProblemParams& p = cfg.params;
      json j = hsc::to_json(closed_forms(p.N, p.lambda1, p.lambda2, p.s));
      j["N"] = p.N;
      j["s"] = p.s;
      j["lambda"] = {p.lambda1, p.lambda2};
      j["extremal_mass"] = {extremal_mass(p.N, p.lambda1, p.s), extremal_mass(p.N, p.lambda2, p.s)};
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (cmd == "classify") {
      const RegimeReport r = classify(cfg.params);
      json j = hsc::to_json(r);
      j["params"] = hsc::to_json(cfg.params);
      j["separability"] = hsc::to_json(separability_check(cfg.params));
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (cmd == "lemma") {
      cfg.lemma.validate();
      const SigmaGrid grid = SigmaGrid::around(cfg.lemma);
      const auto inf = algebraic_inf(cfg.lemma, grid);
      json j{{"A", cfg.lemma.A},           {"B", cfg.lemma.B},   {"theta", cfg.lemma.theta},
             {"s", cfg.lemma.s},           {"N", cfg.lemma.N},   {"nu", cfg.lemma.nu},
             {"reference", cfg.lemma.reference_level()},
             {"cell_ratio", grid.cell_ratio()}};
      j["inf"] = inf ? json(*inf) : json(nullptr);
      json thresholds = json::array();
      for (double eps : cfg.lemma_eps) {
        const auto nu = lemma_threshold(cfg.lemma, eps, grid);
        thresholds.push_back({{"eps", eps}, {"nu", nu ? json(*nu) : json(nullptr)}});
      }
      j["thresholds"] = thresholds;
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (cmd == "sweep") return run_sweep(cfg, out);

    validate(cfg);
    const GridPtr grid = make_grid(cfg);
    if (cmd == "evaluate" || cmd == "project") {
      if (cfg.profiles.empty()) throw Error(ErrorKind::InvalidParameter, "--profiles is required");
      const StatePair pair = read_profiles_csv(cfg.profiles, cfg.params.N);
      const EnergyModel model(pair.grid(), cfg.params);
      if (cmd == "evaluate") {
        json j = hsc::to_json(model.breakdown(pair));
        j["nehari_residual"] = model.nehari_residual(pair);
        out << j.dump(2) << '\n';
        return kExitOk;
      }
      const ProjectionResult pr = project(model, pair);
      const fs::path dir = next_run_dir(cfg.output_dir);
      write_profiles_csv(dir / "profiles.csv", pr.projected);
      json j = hsc::to_json(pr);
      j["run_dir"] = dir.string();
      j["energy"] = model.total(pr.projected);
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    SolverReport rep;
    if (cmd == "ground-state") {
      rep = ground_state(cfg.params, initial_pair(cfg, grid), cfg.descent);
    } else if (cmd == "mountain-pass") {
      rep = mountain_pass(cfg.params, grid, cfg.path);
    } else {
      ProbeOptions opts = cfg.probe;
      opts.base_descent = cfg.descent;
      rep = semitrivial_probe(cfg.params, grid,
                              cfg.which == "first" ? SemitrivialBranch::First : SemitrivialBranch::Second,
                              opts);
    }
    persist(rep, cfg, out);
    return rep.converged ? kExitOk : kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace hsc::cli
