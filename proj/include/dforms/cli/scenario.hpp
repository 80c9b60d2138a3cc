#pragma once

#include "dforms/diagnostics/diagnostics.hpp"
#include "dforms/solver/initial_data.hpp"
#include "dforms/solver/integrator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dforms {

inline constexpr int kSchemaVersion = 1;

struct MeshConfig {
  int dim = 3;
  std::vector<int> cells;
  std::vector<double> length;
  std::vector<bool> periodic;

  MeshPtr build() const;
};

struct ClosureConfig {
  ClosureSpec spec;  ///< not yet validated
  /// "none" or "inverse_temperature".
  std::string hook = "none";
};

struct RunConfig {
  double dt = 0.0;
  double t_end = 0.0;
  Scheme scheme = Scheme::RK4;
  double report_interval = 0.0;  ///< 0 reports every step
  double checkpoint_interval = 0.0;  ///< 0 disables checkpoints
  std::uint64_t seed = 1;
  bool evolve_momentum = true;
};

struct DiagnosticsConfig {
  std::optional<FluxSurface> surface;
  /// Named pass/fail bounds for the summary: energy_drift, mass_drift,
  /// divB, production, mu_monotone, flux_balance.
  std::map<std::string, double> tolerances;
};

struct Scenario {
  std::string name;
  MeshConfig mesh;
  EosParameters eos;
  double mu0 = 1.0;
  ClosureConfig closure;
  InitialProfile initial;
  std::string checkpoint;  ///< restart file; replaces the initial profile
  RunConfig run;
  /// One per closure process; empty on periodic meshes.
  std::vector<BoundaryCondition> bcs;
  DiagnosticsConfig diagnostics;
};

enum class ParseMode {
  Full,         ///< every block required
  ClosureOnly,  ///< only schema, mesh.dim and closure are required
};

/// Parses TOML scenario text. Every key must be consumed; unknown keys and
/// schema violations throw ConfigError naming the exact field path.
Scenario parse_scenario(const std::string& text, const std::string& name, ParseMode mode = ParseMode::Full);
Scenario load_scenario(const std::string& path, ParseMode mode = ParseMode::Full);

/// Closure spec with the configured hook attached, validated for the mesh
/// dimension (throws ClosureError on violation).
ClosureSpec build_closure(const Scenario& sc);

}  // namespace dforms
