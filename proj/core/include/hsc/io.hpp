#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hsc/closed_forms.hpp"
#include "hsc/energy.hpp"
#include "hsc/nehari.hpp"
#include "hsc/regimes.hpp"
#include "hsc/solvers.hpp"

namespace hsc {

/// Version tag written into every report document.
inline constexpr int kReportSchema = 1;

nlohmann::json to_json(const HProfile& h);
nlohmann::json to_json(const ProblemParams& params);
nlohmann::json to_json(const EnergyBreakdown& b);
nlohmann::json to_json(const ProjectionResult& r);
nlohmann::json to_json(const ClosedFormBundle& b);
nlohmann::json to_json(const SeparabilityCheck& c);
nlohmann::json to_json(const RegimeReport& r);
nlohmann::json to_json(const LevelDiagnostics& d);
/// Report without the profiles (those go to CSV); carries the grid header
/// needed to rebuild them.
nlohmann::json to_json(const SolverReport& r);

HProfile h_profile_from_json(const nlohmann::json& j);
/// Missing fields keep their defaults; every present field is type-checked.
ProblemParams params_from_json(const nlohmann::json& j, ProblemParams base = {});
/// Rebuilds a report; `profiles` must come from the matching CSV.
SolverReport report_from_json(const nlohmann::json& j, StatePair profiles);

/// CSV with header `r,u,v`, one row per node, 17 significant digits.
void write_profiles_csv(const std::filesystem::path& path, const StatePair& pair);
/// Reads `r,u,v` and rebuilds the log-uniform grid of dimension N from the r
/// column. Throws IncompatibleGrid if the nodes are not log-uniform.
StatePair read_profiles_csv(const std::filesystem::path& path, int N);

/// CSV with header `r,value`.
void write_function_csv(const std::filesystem::path& path, const RadialFunction& f);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace hsc
