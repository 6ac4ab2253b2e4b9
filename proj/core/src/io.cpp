#include "hsc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hsc/error.hpp"

namespace hsc {

using nlohmann::json;

namespace {

json branch_json(const RegimeBranch& b) {
  return {{"applicable", b.applicable},
          {"case", b.case_label},
          {"trigger", b.trigger},
          {"nu", to_string(b.nu)}};
}

SolverKind kind_from_string(const std::string& s) {
  if (s == "ground_state") return SolverKind::GroundState;
  if (s == "mountain_pass") return SolverKind::MountainPass;
  if (s == "semitrivial_probe") return SolverKind::SemitrivialProbe;
  throw Error(ErrorKind::Io, "unknown report kind '" + s + "'");
}

Classification classification_from_string(const std::string& s) {
  if (s == "local_min") return Classification::LocalMin;
  if (s == "saddle") return Classification::Saddle;
  if (s == "inconclusive") return Classification::Inconclusive;
  throw Error(ErrorKind::Io, "unknown classification '" + s + "'");
}

template <typename T>
void read_field(const json& j, const char* key, T& out, std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad.emplace_back(key);
  }
}

std::string format_row(double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", a, b, c);
  return buf;
}

}  // namespace

json to_json(const HProfile& h) {
  if (h.kind == HProfile::Kind::Constant) return {{"kind", "constant"}, {"c", h.c}};
  return {{"kind", "bump"}, {"p", h.p}, {"q", h.q}};
}

json to_json(const ProblemParams& p) {
  return {{"N", p.N},         {"s", p.s},         {"lambda1", p.lambda1}, {"lambda2", p.lambda2},
          {"alpha", p.alpha}, {"beta", p.beta},   {"nu", p.nu},           {"h", to_json(p.h)}};
}

json to_json(const EnergyBreakdown& b) {
  return {{"kinetic_u", b.kinetic_u}, {"kinetic_v", b.kinetic_v}, {"hardy_u", b.hardy_u},
          {"hardy_v", b.hardy_v},     {"hs_u", b.hs_u},           {"hs_v", b.hs_v},
          {"coupling", b.coupling},   {"total", b.total}};
}

json to_json(const ProjectionResult& r) {
  return {{"t_star", r.t_star},
          {"residual", r.residual},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"iterations", r.iterations}};
}

json to_json(const ClosedFormBundle& b) {
  return {{"Lambda_N", b.hardy_const},
          {"critical_exponent", b.crit_exp},
          {"a_lambda", {b.a_lambda[0], b.a_lambda[1]}},
          {"prefactor", {b.prefactor[0], b.prefactor[1]}},
          {"S", {b.best_const[0], b.best_const[1]}},
          {"level", {b.crit_level[0], b.crit_level[1]}}};
}

json to_json(const SeparabilityCheck& c) {
  return {{"cond_i", c.cond_i},
          {"cond_ii", c.cond_ii},
          {"ratio", c.ratio},
          {"threshold", c.threshold},
          {"ratio_form_i", c.ratio_form_i},
          {"ratio_form_ii", c.ratio_form_ii}};
}

json to_json(const RegimeReport& r) {
  json j{{"subcritical", r.subcritical},
         {"critical", r.critical},
         {"h_satisfies_H", r.h_satisfies_H},
         {"critical_needs_small_nu", r.critical_needs_small_nu},
         {"boundary", r.boundary},
         {"thm_1_1", branch_json(r.thm_1_1)},
         {"thm_1_3", branch_json(r.thm_1_3)},
         {"notes", r.notes}};
  j["thm_1_2"] = json::array();
  for (const auto& b : r.thm_1_2) j["thm_1_2"].push_back(branch_json(b));
  j["thm_1_5"] = json::array();
  for (const auto& b : r.thm_1_5) j["thm_1_5"].push_back(branch_json(b));
  return j;
}

json to_json(const LevelDiagnostics& d) {
  return {{"level1", d.level1}, {"level2", d.level2}, {"min", d.min_level}, {"sum", d.sum_level}};
}

json to_json(const SolverReport& r) {
  json j{{"schema", kReportSchema},
         {"kind", to_string(r.kind)},
         {"params", to_json(r.params)},
         {"energy", r.energy},
         {"gradient_norm", r.gradient_norm},
         {"nehari_residual", r.nehari_residual},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"status", r.status},
         {"level_diagnostics", to_json(r.levels)},
         {"metrics", r.metrics},
         {"notes", r.notes},
         {"path_energies", r.path_energies}};
  j["classification"] = r.classification ? json(to_string(*r.classification)) : json(nullptr);
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back({t.iteration, t.energy, t.gradient_norm, t.step});
  j["trace"] = std::move(trace);
  if (r.profiles.grid()) {
    const RadialGrid& g = *r.profiles.grid();
    j["grid"] = {{"N", g.dimension()}, {"r_min", g.r_min()}, {"r_max", g.r_max()},
                 {"n_nodes", g.size()}};
  }
  return j;
}

HProfile h_profile_from_json(const json& j) {
  const std::string kind = j.value("kind", std::string("constant"));
  HProfile h;
  if (kind == "constant") {
    h = HProfile::constant(j.value("c", 1.0));
  } else if (kind == "bump") {
    h = HProfile::bump(j.value("p", 1.0), j.value("q", 1.0));
  } else {
    throw Error(ErrorKind::InvalidParameter, "h.kind must be 'constant' or 'bump', got '" + kind + "'");
  }
  h.validate();
  return h;
}

ProblemParams params_from_json(const json& j, ProblemParams base) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidParameter, "params must be a JSON object");
  std::vector<std::string> bad;
  read_field(j, "N", base.N, bad);
  read_field(j, "s", base.s, bad);
  read_field(j, "lambda1", base.lambda1, bad);
  read_field(j, "lambda2", base.lambda2, bad);
  read_field(j, "alpha", base.alpha, bad);
  read_field(j, "beta", base.beta, bad);
  read_field(j, "nu", base.nu, bad);
  if (!bad.empty()) {
    std::string msg = "malformed fields:";
    for (const auto& b : bad) msg += " " + b;
    throw Error(ErrorKind::InvalidParameter, msg);
  }
  if (j.contains("h")) base.h = h_profile_from_json(j.at("h"));
  return base;
}

SolverReport report_from_json(const json& j, StatePair profiles) {
  if (j.value("schema", 0) != kReportSchema) {
    throw Error(ErrorKind::Io, "unsupported report schema");
  }
  SolverReport r;
  try {
    r.kind = kind_from_string(j.at("kind").get<std::string>());
    r.params = params_from_json(j.at("params"));
    r.energy = j.at("energy").get<double>();
    r.gradient_norm = j.at("gradient_norm").get<double>();
    r.nehari_residual = j.at("nehari_residual").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.status = j.at("status").get<std::string>();
    const json& lv = j.at("level_diagnostics");
    r.levels = {lv.at("level1").get<double>(), lv.at("level2").get<double>(),
                lv.at("min").get<double>(), lv.at("sum").get<double>()};
    if (!j.at("classification").is_null()) {
      r.classification = classification_from_string(j.at("classification").get<std::string>());
    }
    for (const auto& t : j.at("trace")) {
      r.trace.push_back({t.at(0).get<int>(), t.at(1).get<double>(), t.at(2).get<double>(),
                         t.at(3).get<double>()});
    }
    r.metrics = j.at("metrics").get<std::map<std::string, double>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.path_energies = j.at("path_energies").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed report: ") + e.what());
  }
  r.profiles = std::move(profiles);
  return r;
}

void write_profiles_csv(const std::filesystem::path& path, const StatePair& pair) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "r,u,v\n";
  const auto r = pair.grid()->nodes();
  for (std::size_t i = 0; i < r.size(); ++i) out << format_row(r[i], pair.u[i], pair.v[i]);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

StatePair read_profiles_csv(const std::filesystem::path& path, int N) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,u,v") throw Error(ErrorKind::Io, path.string() + ": expected header 'r,u,v'");
  std::vector<double> r, u, v;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double a = 0, b = 0, c = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
      throw Error(ErrorKind::Io, path.string() + ": malformed row " + std::to_string(row));
    }
    r.push_back(a);
    u.push_back(b);
    v.push_back(c);
  }
  if (r.size() < 2) throw Error(ErrorKind::Io, path.string() + ": too few rows");
  GridPtr grid = build_grid(N, r.front(), r.back(), r.size());
  const auto nodes = grid->nodes();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(nodes[i] - r[i]) > 1e-12 * r[i]) {
      throw Error(ErrorKind::IncompatibleGrid,
                  path.string() + ": r column is not a log-uniform grid (row " +
                      std::to_string(i + 2) + ")");
    }
  }
  return {RadialFunction(grid, std::move(u)), RadialFunction(grid, std::move(v))};
}

void write_function_csv(const std::filesystem::path& path, const RadialFunction& f) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "r,value\n";
  const auto r = f.grid()->nodes();
  char buf[96];
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r[i], f[i]);
    out << buf;
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

}  // namespace hsc
