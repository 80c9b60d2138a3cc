#pragma once

#include "dforms/cli/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace dforms {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitBlowUp = 3,
  kExitValidation = 4,
};

/// Environment variable naming the artifact root directory.
inline constexpr const char* kArtifactEnv = "DFORMS_ARTIFACT_DIR";

/// <root>/<scenario stem>, with root from the environment (default "artifacts").
std::filesystem::path artifact_dir(const std::string& scenario_path);

/// Integrates the scenario and writes manifest.json, timeseries.csv,
/// summary.json and optional checkpoints into `out`. Returns an exit code.
int run_scenario(const Scenario& sc, const std::filesystem::path& out, std::ostream& log);

struct ValidationOutcome {
  bool passed = false;
  std::string json;
};

/// Onsager-Casimir and Curie checks of the scenario closure.
ValidationOutcome validate_scenario(const Scenario& sc, int samples = 200, std::uint64_t seed = 1);

/// Hom-dimension table, Hodge recovery and tensor commutant as JSON.
std::string curie_report(int n, int samples, std::uint64_t seed);

/// Checkpoint names: m, nu1, nu2, beta, s, sigma_prod (m stored as a 1-form).
void save_fluid_checkpoint(const std::string& path, const FluidState& st);
FluidState load_fluid_checkpoint(const std::string& path);

}  // namespace dforms
