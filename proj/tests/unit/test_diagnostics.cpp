#include "support/fluid_fixtures.hpp"

#include "dforms/core/error.hpp"
#include "dforms/diagnostics/diagnostics.hpp"
#include "dforms/solver/integrator.hpp"

#include <gtest/gtest.h>

using namespace dforms;
using namespace dforms::testing;

namespace {

SystemState advance(const AdvectedSystem& sys, SystemState st, double dt, int steps) {
  for (int i = 0; i < steps; ++i) st = step([&](const SystemState& x) { return sys.rhs(x); }, st, dt, Scheme::RK4);
  return st;
}

// Resistive decay at rest in 2D: beta is a 1-form, j_beta a 0-form.
struct ResistiveRun {
  MeshPtr mesh;
  AdvectedSystem system;
  SystemState state;
};

ResistiveRun resistive_run(int cells, double kappa) {
  const auto mesh = periodic_box(2, cells);
  MhdCoefficients c;
  c.kappa_BB = kappa;
  InitialProfile p;
  p.field = {0.2, -0.1, 0.0};
  p.potential_amplitude = 0.3;
  p.seed = 11;
  auto st = make_initial_state(mesh, p, 2.0, 1.0).to_system();
  // Frozen flow: the fixed surface is the advected surface.
  return {mesh, make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(c, 2), 2, {}, {false}), st};
}

}  // namespace

TEST(Energy, UniformRestState) {
  const auto mesh = periodic_box(3, 4);
  InitialProfile p;
  p.n1 = 0.7;
  p.n2 = 1.1;
  p.s = 0.2;
  p.field = {0.3, 0.0, -0.4};
  const auto st = make_initial_state(mesh, p, 2.0, 1.0);
  const EquationOfState eos;
  const double mu0 = 1.5;
  const double e0 = eos.energy(0.7, 1.1, 0.2);
  const double volume = std::pow(kTwoPi, 3);
  EXPECT_NEAR(total_energy(st, eos, mu0), volume * (e0 + 0.25 / (2.0 * mu0)), 1e-12 * volume);
  EXPECT_NEAR(total_mass(st, 2.0, 1.0), volume * (2.0 * 0.7 + 1.1), 1e-12 * volume);
}

TEST(LocalEnergy, UniformStateHasZeroResidual) {
  const auto mesh = periodic_box(3, 6);
  InitialProfile p;
  p.field = {0.1, 0.2, 0.3};
  p.velocity = {0.2, -0.1, 0.05};
  const auto sys = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(full_coefficients(3), 3), 3);
  EXPECT_LE(local_energy_residual(sys, make_initial_state(mesh, p, 2.0, 1.0).to_system()).max_abs(), 1e-13);
}

TEST(LocalEnergy, SecondOrderAndIntegratesToEnergyRate) {
  for (int n : {2, 3}) {
    const auto sys = make_mhd_system(mixing_eos(), 1.3, validated_mhd_closure(full_coefficients(n), n), n);
    std::vector<double> norms;
    for (int cells : {16, 32}) {
      const auto st = analytic_fluid_state(periodic_box(n, cells), 2.0, 1.0).to_system();
      const auto r = local_energy_residual(sys, st);
      norms.push_back(l2_norm(r));
      const auto ev = sys.evaluate(st);
      EXPECT_NEAR(integrate(r), energy_rate(ev, st), 1e-12 * l2_norm(r) * std::pow(kTwoPi, n));
    }
    EXPECT_NEAR(slope(norms[0], norms[1]), 2.0, 0.2) << "n = " << n;
  }
  InitialProfile p;
  std::vector<int> cells{8, 8};
  const auto bounded = std::make_shared<const GridMesh>(cells, std::vector<double>{0.1, 0.1}, std::vector<bool>{true, false});
  const auto sys2 = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 2), 2);
  EXPECT_THROW(local_energy_residual(sys2, make_initial_state(bounded, p, 2.0, 1.0).to_system()), BoundaryError);
}

TEST(Flux, CirculationIsTheSurfaceIntegralOfDj) {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    const auto mesh = periodic_box(n, 10);
    const auto j = random_form(mesh, n - 2, rng);
    FluxSurface s;
    s.normal_axis = n - 1;
    s.index = 4;
    s.lo = {2, 1, 3};
    s.hi = {6, 7, 5};
    const double lhs = surface_flux(exterior_derivative(j), s);
    EXPECT_NEAR(boundary_circulation(j, s), lhs, 1e-13 * (1.0 + std::abs(lhs)));
    const auto full = full_cross_section(*mesh, 0, 3);
    EXPECT_LE(std::abs(boundary_circulation(j, full)), 1e-13);
    FluxSurface outside = s;
    outside.hi[0] = 10;
    EXPECT_THROW(surface_flux(exterior_derivative(j), outside), BoundaryError);
  }
}

TEST(Flux, ResistiveAlfvenBalance) {
  auto run = resistive_run(32, 0.05);
  FluxSurface s;
  s.normal_axis = 0;
  s.index = 5;
  s.lo = {0, 4, 0};
  s.hi = {0, 20, 0};
  const auto full = full_cross_section(*run.mesh, 1, 7);
  const int res = run.system.closure().index_of("resistive");
  const double dt = 0.02;
  std::vector<FluxSample> history, closed;
  for (int k = 0; k <= 40; ++k) {
    const auto ev = run.system.evaluate(run.state);
    const auto& j = ev.fluxes[static_cast<std::size_t>(res)];
    history.push_back({k * dt, surface_flux(run.state.forms[2], s), boundary_circulation(j, s)});
    closed.push_back({k * dt, surface_flux(run.state.forms[2], full), boundary_circulation(j, full)});
    run.state = advance(run.system, run.state, dt, 1);
  }
  const auto report = alfven_flux_check(history);
  EXPECT_LE(report.relative_residual, 1e-4);
  EXPECT_GT(report.flux_drift, 1e-4);
  const auto closed_report = alfven_flux_check(closed);
  EXPECT_LE(closed_report.flux_drift, 1e-12);
}

TEST(Flux, NoResistivityMeansConstantFlux) {
  auto run = resistive_run(16, 0.0);
  FluxSurface s;
  s.normal_axis = 1;
  s.index = 3;
  s.lo = {2, 0, 0};
  s.hi = {9, 0, 0};
  const double before = surface_flux(run.state.forms[2], s);
  run.state = advance(run.system, run.state, 0.05, 5);
  EXPECT_EQ(surface_flux(run.state.forms[2], s), before);
}

TEST(Species, ReactionInvariants) {
  const auto mesh = periodic_box(2, 12);
  MhdCoefficients c;
  c.kappa_nu = 0.8;
  c.kappa_nn = 0.05;
  const auto sys = make_mhd_system(mixing_eos(0.4), 1.0, validated_mhd_closure(c, 2), 2);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0, 0.0).to_system();
  std::vector<double> times;
  std::vector<std::vector<double>> totals;
  for (int k = 0; k <= 20; ++k) {
    times.push_back(0.05 * k);
    totals.push_back({integrate(st.forms[0]), integrate(st.forms[1])});
    st = advance(sys, st, 0.05, 1);
  }
  const auto table = species_invariants(times, totals, {{2.0, 1.0}, {1.0, 1.0}}, {0.5, -1.0});
  EXPECT_TRUE(table[0].annihilates);
  EXPECT_LE(table[0].drift_per_time, 1e-13 * std::abs(table[0].initial));
  EXPECT_FALSE(table[1].annihilates);
  EXPECT_GT(table[1].drift_per_time, 1e-4);
  EXPECT_THROW(species_invariants(times, totals, {{1.0, 2.0, 3.0}}, {0.5, -1.0}), Error);

  // Without a closure every combination is conserved.
  const auto ideal = make_mhd_system(mixing_eos(0.4), 1.0, validated_mhd_closure(MhdCoefficients{}, 2), 2);
  auto st2 = analytic_fluid_state(mesh, 2.0, 1.0, 0.0).to_system();
  const std::vector<double> before{integrate(st2.forms[0]), integrate(st2.forms[1])};
  st2 = advance(ideal, st2, 0.05, 4);
  const auto free = species_invariants({0.0, 0.2}, {before, {integrate(st2.forms[0]), integrate(st2.forms[1])}},
                                       {{1.0, 1.0}, {1.0, 0.0}}, {0.5, -1.0});
  for (const auto& row : free) EXPECT_LE(row.drift_per_time, 1e-12);
}

TEST(Entropy, BudgetSplitAndExchangedConstancy) {
  const auto mesh = periodic_box(2, 16);
  const auto sys = make_mhd_system(mixing_eos(), 1.0, validated_mhd_closure(full_coefficients(2), 2), 2);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  const auto b0 = entropy_budget(st, 3);
  double produced = b0.produced;
  for (int k = 0; k < 10; ++k) {
    st = advance(sys, st, 0.02, 1);
    const auto b = entropy_budget(st, 3);
    EXPECT_EQ(b.total, b.produced + b.exchanged);
    EXPECT_NEAR(b.exchanged, b0.exchanged, 1e-12 * std::abs(b0.total));
    EXPECT_GE(b.produced, produced - 1e-12);
    produced = b.produced;
  }
  EXPECT_GT(produced, 0.0);
}

TEST(Report, DiagnoseAndCsv) {
  const auto mesh = periodic_box(3, 8);
  const auto sys = make_mhd_system(mixing_eos(), 1.0, validated_mhd_closure(full_coefficients(3), 3), 3);
  const auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  const auto r = diagnose(sys, st, 0.5, 3, full_cross_section(*mesh, 2, 0));
  EXPECT_EQ(r.step, 3);
  EXPECT_NEAR(r.energy, total_energy(sys, st), 0.0);
  EXPECT_LE(r.divB, 1e-13);
  EXPECT_LE(std::abs(r.circulation), 1e-13);
  EXPECT_GT(r.mu_max, 0.0);
  const std::string row = csv_row(r);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), static_cast<long>(report_columns().size() - 1));
  EXPECT_EQ(csv_header().substr(0, 10), "time,step,");
  EXPECT_EQ(std::stod(row.substr(row.find(',', 5) + 1)), r.energy);
}
