#include "dforms/cli/runner.hpp"

#include "dforms/core/error.hpp"
#include "dforms/curie/intertwiner.hpp"
#include "dforms/grid/io.hpp"
#include "dforms/grid/multi_index.hpp"
#include "dforms/grid/operators.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>

namespace dforms {

using json = nlohmann::ordered_json;

std::filesystem::path artifact_dir(const std::string& scenario_path) {
  const char* env = std::getenv(kArtifactEnv);
  const std::filesystem::path root = env && *env ? env : "artifacts";
  return root / std::filesystem::path(scenario_path).stem();
}

void save_fluid_checkpoint(const std::string& path, const FluidState& st) {
  std::vector<Field> mc;
  for (int i = 0; i < st.m.dim(); ++i) mc.push_back(st.m[i]);
  save_checkpoint(path, {{"m", DiscreteForm(st.mesh_ptr(), 1, mc)},
                         {"nu1", st.nu1},
                         {"nu2", st.nu2},
                         {"beta", st.beta},
                         {"s", st.s},
                         {"sigma_prod", st.sigma_prod}});
}

FluidState load_fluid_checkpoint(const std::string& path) {
  const auto forms = load_checkpoint(path);
  auto get = [&](const std::string& name) -> const DiscreteForm& {
    for (const auto& [k, f] : forms)
      if (k == name) return f;
    throw ConfigError("checkpoint '" + path + "' has no field '" + name + "'");
  };
  FluidState st;
  const auto& m = get("m");
  st.m = CovectorDensity(m.mesh_ptr(), m.components());
  st.nu1 = get("nu1");
  st.nu2 = get("nu2");
  st.beta = get("beta");
  st.s = get("s");
  st.sigma_prod = get("sigma_prod");
  return st;
}

namespace {

json closure_json(const ClosureSpec& spec, const std::string& hook) {
  json j;
  j["processes"] = json::array();
  for (const auto& p : spec.processes()) {
    j["processes"].push_back({{"name", p.name},
                              {"kind", to_string(p.kind)},
                              {"degree", p.degree},
                              {"action", p.action == curie::Action::Right ? "right" : "left"},
                              {"parity", to_string(p.parity)},
                              {"lambdas", p.lambdas}});
  }
  j["kappa"] = json::array();
  for (Eigen::Index a = 0; a < spec.kappa().rows(); ++a) {
    std::vector<double> row;
    for (Eigen::Index b = 0; b < spec.kappa().cols(); ++b) row.push_back(spec.kappa()(a, b));
    j["kappa"].push_back(row);
  }
  const auto& v = spec.viscosity();
  j["viscosity"] = {v.homothety, v.traceless, v.skew};
  j["hook"] = hook;
  return j;
}

json manifest_json(const Scenario& sc, const ClosureSpec& spec) {
  json j;
  j["scenario"] = sc.name;
  j["schema"] = kSchemaVersion;
  j["mesh"] = {{"dim", sc.mesh.dim}, {"cells", sc.mesh.cells}, {"length", sc.mesh.length}, {"periodic", sc.mesh.periodic}};
  j["scheme"] = to_string(sc.run.scheme);
  j["dt"] = sc.run.dt;
  j["t_end"] = sc.run.t_end;
  j["seed"] = sc.run.seed;
  j["evolve_momentum"] = sc.run.evolve_momentum;
  const auto& e = sc.eos;
  j["eos"] = {{"c0", e.c0}, {"cv", e.cv}, {"b1", e.b1}, {"b2", e.b2}, {"M1", e.M1}, {"M2", e.M2}, {"mixing", e.mixing},
              {"mu0", sc.mu0}};
  j["closure"] = closure_json(spec, sc.closure.hook);
  j["initial"] = sc.checkpoint.empty() ? json(sc.initial.name) : json("checkpoint:" + sc.checkpoint);
  return j;
}

void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream os(p);
  os << j.dump(2) << "\n";
}

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

}  // namespace

int run_scenario(const Scenario& sc, const std::filesystem::path& out, std::ostream& log) {
  for (const auto& p : sc.closure.spec.processes()) {
    if (p.name != "heat" && p.name != "diffusion" && p.name != "resistive" && p.name != "reaction") {
      throw ConfigError("closure.process: '" + p.name +
                        "' has no MHD binding (expected heat, diffusion, resistive or reaction)");
    }
  }
  ClosureSpec spec;
  try {
    spec = build_closure(sc);
  } catch (const ClosureError& e) {
    log << "closure rejected: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto mesh = sc.mesh.build();
  const EquationOfState eos(sc.eos);
  FluidState fs = sc.checkpoint.empty() ? make_initial_state(mesh, sc.initial, sc.eos.M1, sc.eos.M2)
                                        : load_fluid_checkpoint(sc.checkpoint);
  if (fs.mesh() != *mesh) throw ConfigError("initial.checkpoint: mesh differs from the mesh block");
  const bool periodic = mesh->fully_periodic();
  const auto system =
      make_mhd_system(eos, sc.mu0, spec, sc.mesh.dim, periodic ? std::vector<BoundaryCondition>{} : sc.bcs,
                      {sc.run.evolve_momentum});

  std::filesystem::create_directories(out);
  write_json(out / "manifest.json", manifest_json(sc, spec));

  SystemState state = fs.to_system();
  const double cfl = cfl_estimate(system, state);
  if (sc.run.dt > cfl) log << "warning: dt = " << sc.run.dt << " exceeds the advisory CFL bound " << cfl << "\n";

  const long total_steps = static_cast<long>(std::ceil(sc.run.t_end / sc.run.dt - 1e-9));
  const long report_every =
      sc.run.report_interval > 0.0 ? std::max(1L, std::lround(sc.run.report_interval / sc.run.dt)) : 1L;
  const long checkpoint_every =
      sc.run.checkpoint_interval > 0.0 ? std::max(1L, std::lround(sc.run.checkpoint_interval / sc.run.dt)) : 0L;

  std::ofstream csv(out / "timeseries.csv");
  csv << csv_header() << "\n";
  std::vector<DiagnosticsReport> reports;
  auto report = [&](double t, long step) {
    reports.push_back(diagnose(system, state, t, step, sc.diagnostics.surface));
    csv << csv_row(reports.back()) << "\n";
    csv.flush();
  };

  Integrator integ([&](const SystemState& x) { return system.rhs(x); }, sc.run.scheme);
  json summary;
  summary["scenario"] = sc.name;
  int code = kExitOk;
  try {
    report(0.0, 0);
    for (long k = 1; k <= total_steps; ++k) {
      const double dt = std::min(sc.run.dt, sc.run.t_end - integ.time());
      integ.advance(state, dt);
      if (k % report_every == 0 || k == total_steps) report(integ.time(), k);
      if (checkpoint_every > 0 && k % checkpoint_every == 0) {
        save_fluid_checkpoint((out / ("checkpoint_" + std::to_string(k) + ".dfck")).string(),
                              FluidState::from_system(state));
      }
    }
    summary["status"] = "completed";
  } catch (const BlowUpError& e) {
    log << "blow-up: " << e.what() << "\n";
    summary["status"] = "blow-up";
    summary["failed_step"] = e.step();
    code = kExitBlowUp;
  } catch (const ThermodynamicDomainError& e) {
    log << "blow-up: " << e.what() << "\n";
    summary["status"] = "blow-up";
    summary["failed_step"] = integ.steps() + 1;
    code = kExitBlowUp;
  }
  summary["steps"] = integ.steps();
  summary["time"] = integ.time();

  // Drift measures over the reported series.
  const auto& r0 = reports.front();
  double energy_drift = 0.0, mass_drift = 0.0, divB = 0.0, production = 0.0, mu_rise = 0.0;
  double min_rate = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    energy_drift = std::max(energy_drift, std::abs(r.energy - r0.energy) / std::abs(r0.energy));
    mass_drift = std::max(mass_drift, std::abs(r.mass - r0.mass) / std::abs(r0.mass));
    divB = std::max(divB, r.divB);
    min_rate = std::min(min_rate, r.production_rate);
    production = std::max(production, -r.production_rate);
    if (k > 0) {
      production = std::max(production, reports[k - 1].entropy_produced - r.entropy_produced);
      mu_rise = std::max(mu_rise, r.mu_max - reports[k - 1].mu_max);
    }
  }
  const double elapsed = reports.back().time - r0.time;
  const double mass_rate = elapsed > 0.0 ? mass_drift / elapsed : mass_drift;
  summary["energy_initial"] = r0.energy;
  summary["energy_final"] = reports.back().energy;
  summary["energy_drift"] = energy_drift;
  summary["mass_drift_per_time"] = mass_rate;
  summary["divB_max"] = divB;
  summary["production_rate_min"] = min_rate;
  summary["entropy_produced_final"] = reports.back().entropy_produced;
  summary["mu_max_initial"] = r0.mu_max;
  summary["mu_max_final"] = reports.back().mu_max;
  summary["mu_max_rise"] = mu_rise;
  double flux_balance = std::numeric_limits<double>::quiet_NaN();
  if (sc.diagnostics.surface && reports.size() >= 5) {
    std::vector<FluxSample> hist;
    for (const auto& r : reports) hist.push_back({r.time, r.flux, r.circulation});
    try {
      const auto fb = alfven_flux_check(hist);
      flux_balance = fb.relative_residual;
      summary["flux_balance"] = {{"relative_residual", fb.relative_residual},
                                 {"max_residual", fb.max_residual},
                                 {"flux_drift", fb.flux_drift}};
    } catch (const Error& e) {
      log << "flux balance skipped: " << e.what() << "\n";
    }
  }

  std::vector<Check> checks;
  for (const auto& [name, tol] : sc.diagnostics.tolerances) {
    double value = 0.0;
    if (name == "energy_drift") value = energy_drift;
    if (name == "mass_drift") value = mass_rate;
    if (name == "divB") value = divB;
    if (name == "production") value = production;
    if (name == "mu_monotone") value = mu_rise;
    if (name == "flux_balance") value = flux_balance;
    checks.push_back({name, value, tol, value <= tol});
  }
  bool passed = code == kExitOk;
  summary["checks"] = json::array();
  for (const auto& c : checks) {
    summary["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    passed = passed && c.passed;
  }
  summary["passed"] = passed;
  write_json(out / "summary.json", summary);
  if (code == kExitOk && !passed) code = kExitValidation;
  log << sc.name << ": " << summary["status"].get<std::string>() << ", " << integ.steps() << " steps, energy drift "
      << energy_drift << ", " << (passed ? "passed" : "FAILED") << "\n";
  return code;
}

ValidationOutcome validate_scenario(const Scenario& sc, int samples, std::uint64_t seed) {
  const int n = sc.mesh.dim;
  ClosureSpec spec = sc.closure.spec;
  const auto report = validate_onsager(spec, n);

  std::vector<curie::FiberRep> fibers;
  std::vector<std::string> labels;
  for (const auto& p : spec.processes()) {
    fibers.push_back(p.fiber(n));
    labels.push_back(p.name);
  }
  const auto pattern = curie::admissible_pattern(fibers, curie::sample_group(n, samples, true, seed));
  json curie;
  curie["processes"] = labels;
  curie["pattern"] = json::array();
  std::vector<std::string> violations;
  for (std::size_t a = 0; a < fibers.size(); ++a) {
    std::vector<int> row;
    for (std::size_t b = 0; b < fibers.size(); ++b) {
      row.push_back(pattern[a][b] ? 1 : 0);
      const double k = spec.kappa()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (k != 0.0 && !pattern[a][b]) violations.push_back(labels[a] + " <- " + labels[b]);
    }
    curie["pattern"].push_back(row);
  }
  curie["violations"] = violations;

  json j;
  j["scenario"] = sc.name;
  j["dim"] = n;
  j["onsager"] = json::parse(report.to_json());
  j["curie"] = curie;
  const bool passed = report.passed && violations.empty();
  j["passed"] = passed;
  return {passed, j.dump(2)};
}

std::string curie_report(int n, int samples, std::uint64_t seed) {
  if (n != 2 && n != 3) throw ConfigError("--n must be 2 or 3");
  const auto group = curie::sample_group(n, samples, true, seed);
  json j;
  j["n"] = n;
  j["samples"] = samples;
  j["seed"] = seed;
  j["table"] = json::array();
  for (const auto& e : curie::form_dimension_table(n, group)) {
    j["table"].push_back({{"source", e.source.label()},
                          {"target", e.target.label()},
                          {"dimension", e.dimension},
                          {"residual", e.residual}});
  }
  j["hodge"] = json::array();
  for (int k = 0; k <= n; ++k) {
    const auto space =
        curie::intertwiner_space(curie::FiberRep::form(n, k, curie::Action::Right),
                                 curie::FiberRep::form(n, n - k, curie::Action::Left), group);
    double cosine = 0.0;
    if (space.dimension() == 1) {
      const int d = multi_index::binomial(n, k);
      Eigen::MatrixXd H(multi_index::binomial(n, n - k), d);
      for (int p = 0; p < d; ++p) {
        std::vector<double> e(static_cast<std::size_t>(d), 0.0);
        e[static_cast<std::size_t>(p)] = 1.0;
        const auto h = multi_index::hodge(n, k, e);
        for (std::size_t q = 0; q < h.size(); ++q) H(static_cast<Eigen::Index>(q), p) = h[q];
      }
      cosine = std::abs((space.basis[0].array() * H.array()).sum()) / (space.basis[0].norm() * H.norm());
    }
    j["hodge"].push_back({{"degree", k}, {"dimension", space.dimension()}, {"cosine", cosine}});
  }
  const auto tensor = curie::intertwiner_space(curie::FiberRep::tensor(n), curie::FiberRep::tensor(n), group);
  j["tensor_commutant_dimension"] = tensor.dimension();
  return j.dump(2);
}

}  // namespace dforms
