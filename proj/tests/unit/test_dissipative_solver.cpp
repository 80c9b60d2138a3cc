#include "support/fluid_fixtures.hpp"

#include "dforms/core/error.hpp"
#include "dforms/solver/integrator.hpp"

#include <gtest/gtest.h>

using namespace dforms;
using namespace dforms::testing;

namespace {

SystemState run(const AdvectedSystem& sys, SystemState st, double dt, int steps, Scheme scheme) {
  Integrator integ([&](const SystemState& x) { return sys.rhs(x); }, scheme);
  for (int i = 0; i < steps; ++i) integ.advance(st, dt);
  return st;
}

double max_abs(const SystemState& s) {
  double m = s.m.max_abs();
  for (const auto& f : s.forms) m = std::max(m, f.max_abs());
  return std::max(m, s.produced.max_abs());
}

SystemState difference(SystemState a, const SystemState& b) { return a.add_scaled(b, -1.0); }

FluidState uniform_state(const MeshPtr& mesh, double n1, double n2, double s, const std::array<double, 3>& B) {
  InitialProfile p;
  p.n1 = n1;
  p.n2 = n2;
  p.s = s;
  p.field = B;
  return make_initial_state(mesh, p, 2.0, 1.0);
}

}  // namespace

// --- equation of state -------------------------------------------------------

TEST(Eos, AnalyticPartialsMatchFiniteDifferences) {
  const auto eos = mixing_eos(0.25);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(0.3, 2.0);
  for (int t = 0; t < 50; ++t) {
    const double n1 = dist(rng), n2 = dist(rng), s = dist(rng) - 1.0;
    const auto d = eos.partials(n1, n2, s);
    const double eps = 1e-5;
    const double fd[3] = {
        (eos.energy(n1 + eps, n2, s) - eos.energy(n1 - eps, n2, s)) / (2 * eps),
        (eos.energy(n1, n2 + eps, s) - eos.energy(n1, n2 - eps, s)) / (2 * eps),
        (eos.energy(n1, n2, s + eps) - eos.energy(n1, n2, s - eps)) / (2 * eps),
    };
    for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(d[i] - fd[i]), 1e-6 * std::abs(d[i]));
    EXPECT_GT(d[2], 0.0);
  }
}

TEST(Eos, PressureIdentityAndDomain) {
  const auto eos = mixing_eos(0.1);
  const auto mesh = periodic_box(3, 4);
  std::mt19937_64 rng(2);
  const Field n1 = 1.0 + 0.5 * random_field(*mesh, rng);
  const Field n2 = 1.0 + 0.5 * random_field(*mesh, rng);
  const Field s = random_field(*mesh, rng);
  const auto th = eos.evaluate(n1, n2, s);
  const Field identity = th.mu1 * n1 + th.mu2 * n2 + th.T * s - th.e;
  EXPECT_LE((th.p - identity).abs().maxCoeff(), 1e-15 * th.p.abs().maxCoeff());
  // p = (2/3) g + theta (n1 + n2) for this law.
  const Field g = th.e - eos.params().b1 * n1 - eos.params().b2 * n2 - 0.1 * (n1 * n1.log() + n2 * n2.log());
  EXPECT_LE((th.p - (2.0 / 3.0 * g + 0.1 * (n1 + n2))).abs().maxCoeff(), 1e-13);
  EXPECT_THROW(eos.evaluate(-n1, n2, s), ThermodynamicDomainError);
  EXPECT_EQ(eos.stoichiometry(), 2);
  EosParameters bad;
  bad.M1 = 2.5;
  EXPECT_THROW(EquationOfState{bad}, ConfigError);
}

// --- dual variables ----------------------------------------------------------

TEST(DualFields, RestStateAndLayout) {
  const auto mesh = periodic_box(3, 4);
  const EquationOfState eos;
  const auto st = uniform_state(mesh, 1.0, 0.5, 0.2, {0.3, -0.4, 0.5});
  const auto d = dual_fields(st, eos, 2.0);
  const auto th = eos.evaluate(st.nu1[0], st.nu2[0], st.s[0]);
  EXPECT_EQ((d.mu_tilde1[0] - th.mu1).abs().maxCoeff(), 0.0);
  EXPECT_EQ((d.mu_tilde2[0] - th.mu2).abs().maxCoeff(), 0.0);
  EXPECT_EQ(d.m.max_abs(), 0.0);
  // b1 / M1 = b2 / M2 for the default law: equal per-mass potentials, mu = 0.
  EXPECT_LE(d.mu.max_abs(), 1e-15);
  EXPECT_DOUBLE_EQ(d.H_form[0][0], 0.15);
  EXPECT_DOUBLE_EQ(d.H_form[1][0], -0.2);
  EXPECT_DOUBLE_EQ(d.H_form[2][0], 0.25);
  EXPECT_LE((d.p[0] - (th.mu1 * st.nu1[0] + th.mu2 * st.nu2[0] + th.T * st.s[0] - th.e)).abs().maxCoeff(), 1e-15);
}

TEST(DualFields, KineticShiftOfChemicalPotentials) {
  const auto mesh = periodic_box(2, 8);
  const auto eos = mixing_eos();
  const auto st = analytic_fluid_state(mesh, 2.0, 1.0);
  const auto d = dual_fields(st, eos, 1.0);
  const auto th = eos.evaluate(st.nu1[0], st.nu2[0], st.s[0]);
  const Field rho = st.rho(2.0, 1.0);
  const Field u2 = (st.m[0] / rho).square() + (st.m[1] / rho).square();
  EXPECT_LE((d.mu_tilde1[0] - (th.mu1 - u2)).abs().maxCoeff(), 1e-14);
  EXPECT_LE((d.mu_tilde2[0] - (th.mu2 - 0.5 * u2)).abs().maxCoeff(), 1e-14);
  EXPECT_LE((d.mu[0] - (d.mu_tilde1[0] / 2.0 - d.mu_tilde2[0])).abs().maxCoeff(), 1e-15);
}

// --- right-hand side ---------------------------------------------------------

TEST(Rhs, EquilibriumIsAFixedPoint) {
  const auto mesh = periodic_box(3, 6);
  const auto sys = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 3), 3);
  const auto st = uniform_state(mesh, 1.0, 0.7, 0.3, {0.2, 0.1, -0.3});
  EXPECT_LE(max_abs(sys.rhs(st.to_system())), 1e-14);
  // Dissipation does not move a uniform state either.
  const auto diss = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(full_coefficients(3), 3), 3);
  EXPECT_LE(max_abs(diss.rhs(st.to_system())), 1e-14);
}

TEST(Rhs, SemiDiscreteEnergyIsExactForAnyClosure) {
  for (int n : {2, 3}) {
    const auto mesh = periodic_box(n, n == 2 ? 16 : 8);
    const auto closure = validated_mhd_closure(full_coefficients(n), n);
    const auto sys = make_mhd_system(mixing_eos(), 1.3, closure, n);
    const auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
    const auto ev = sys.evaluate(st);
    double scale = 0.0;
    scale += std::abs(pairing(ev.tangent.m, ev.duals.u));
    for (std::size_t q = 0; q < st.forms.size(); ++q) scale += std::abs(pairing(ev.duals.b[q], ev.tangent.forms[q]));
    EXPECT_GT(scale, 1e-3);
    EXPECT_LE(std::abs(energy_rate(ev, st)), 1e-12 * scale) << "n = " << n;
    EXPECT_GE(integrate(ev.production), 0.0);
  }
}

TEST(Rhs, ResistiveDiffusionMatchesHeatKernel) {
  // u = 0, B = (sin y, 0, 0): dB/dt = (kappa / mu0) lap B = -(kappa / mu0) B.
  const double kappa = 0.7, mu0 = 2.0;
  MhdCoefficients c;
  c.kappa_BB = kappa;
  std::vector<double> errors;
  for (int cells : {16, 32}) {
    const auto mesh = periodic_box(3, cells);
    auto st = uniform_state(mesh, 1.0, 1.0, 0.2, {0.0, 0.0, 0.0});
    VectorField B(mesh);
    B[0] = sample(*mesh, [](const Point& x) { return std::sin(x[1]); });
    st.beta = flux_form(B);
    const auto sys = make_mhd_system(EquationOfState{}, mu0, validated_mhd_closure(c, 3), 3);
    const auto t = FluidState::from_system(sys.rhs(st.to_system()));
    VectorField expected(mesh);
    expected[0] = -(kappa / mu0) * B[0];
    errors.push_back(max_diff(t.beta, flux_form(expected)));
  }
  EXPECT_NEAR(slope(errors[0], errors[1]), 2.0, 0.1);
}

TEST(Rhs, ReactionConservesMassPointwise) {
  const auto mesh = periodic_box(3, 6);
  MhdCoefficients c;
  c.kappa_nu = 1.5;
  const auto sys = make_mhd_system(mixing_eos(0.4), 1.0, validated_mhd_closure(c, 3), 3);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0);
  st.m = CovectorDensity(mesh);
  const auto t = FluidState::from_system(sys.rhs(st.to_system()));
  EXPECT_GT(t.nu1.max_abs(), 1e-3);
  EXPECT_LE((2.0 * t.nu1[0] + t.nu2[0]).abs().maxCoeff(), 1e-15 * t.nu1.max_abs() * 4);
}

TEST(Rhs, PhysicalMomentumAgreesToSecondOrder) {
  for (int n : {2, 3}) {
    std::vector<double> errors;
    const auto eos = mixing_eos(0.2);
    const auto c = full_coefficients(n);
    for (int cells : {16, 32}) {
      const auto mesh = periodic_box(n, cells);
      const auto sys = make_mhd_system(eos, 1.3, validated_mhd_closure(c, n), n);
      const auto st = analytic_fluid_state(mesh, 2.0, 1.0);
      const auto geometric = sys.rhs(st.to_system()).m;
      const auto physical = physical_momentum_rhs(st, eos, 1.3, c.viscosity);
      errors.push_back((geometric - physical).max_abs());
    }
    EXPECT_NEAR(slope(errors[0], errors[1]), 2.0, 0.2) << "n = " << n;
  }
}

TEST(Rhs, DivergenceTermOfTheLorentzForce) {
  // A non-closed beta activates (div B) H; both paths must still agree.
  const auto mesh = periodic_box(3, 32);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0);
  VectorField B(mesh);
  B[0] = sample(*mesh, [](const Point& x) { return 0.2 * std::sin(x[0]); });
  st.beta += flux_form(B);
  EXPECT_GT(exterior_derivative(st.beta).max_abs(), 0.1);
  const EquationOfState eos;
  const auto sys = make_mhd_system(eos, 1.0, validated_mhd_closure(MhdCoefficients{}, 3), 3);
  const auto diff = sys.rhs(st.to_system()).m - physical_momentum_rhs(st, eos, 1.0, {});
  EXPECT_LE(diff.max_abs(), 2e-2);
}

TEST(Rhs, ClosednessIsPreserved) {
  const auto mesh = periodic_box(3, 8);
  const auto sys = make_mhd_system(mixing_eos(), 1.0, validated_mhd_closure(full_coefficients(3), 3), 3);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  EXPECT_LE(exterior_derivative(st.forms[2]).max_abs(), 1e-13);
  st = run(sys, st, 0.02, 10, Scheme::RK4);
  EXPECT_LE(exterior_derivative(st.forms[2]).max_abs(), 1e-12);
}

TEST(Rhs, ProductionIsNonnegativeAlongARun) {
  const auto mesh = periodic_box(2, 16);
  const auto sys = make_mhd_system(mixing_eos(), 1.0, validated_mhd_closure(full_coefficients(2), 2), 2);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  double produced = integrate(st.produced);
  for (int i = 0; i < 20; ++i) {
    EXPECT_GE(integrate(sys.evaluate(st).production), -1e-12);
    st = step([&](const SystemState& x) { return sys.rhs(x); }, st, 0.01, Scheme::RK4);
    const double next = integrate(st.produced);
    EXPECT_GE(next, produced - 1e-12);
    produced = next;
  }
  EXPECT_GT(produced, 0.0);
}

TEST(Rhs, ConstructionChecks) {
  auto unvalidated = mhd_closure(MhdCoefficients{}, 2.0, 1.0);
  EXPECT_THROW(make_mhd_system(EquationOfState{}, 1.0, unvalidated, 3), ClosureError);
  EXPECT_THROW(make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 3), 2),
               ClosureError);
  // A continuous process of the wrong degree for its quantity.
  ProcessDescriptor p{"heat", AffinityKind::Continuous, 2, curie::Action::Right, Parity::Even, {}, {}};
  ClosureSpec spec({p}, Eigen::MatrixXd::Identity(1, 1));
  spec.validate(3);
  EXPECT_THROW(AdvectedSystem(std::make_shared<MixtureModel>(0, 0.0, 1.0, 1.0), spec, {{{0}, {}}}, 3), DegreeError);
}

// --- general advected systems ------------------------------------------------

TEST(General, ScalarHeatEquationWithInverseTemperatureHook) {
  const double kappa = 0.3;
  const auto mesh = periodic_box(3, 12);
  ProcessDescriptor heat{"heat", AffinityKind::Continuous, 1, curie::Action::Right, Parity::Even, {}, {}};
  ClosureSpec spec({heat}, Eigen::MatrixXd::Constant(1, 1, kappa));
  spec.set_coefficient_hook([](const Field& T, const Field&) { return Field(1.0 / T); });
  spec.validate(3);
  const auto model = std::make_shared<MixtureModel>(0, 0.0, 1.5, 2.0);
  const AdvectedSystem sys(model, spec, {{{0}, {}}}, 3, {false});

  SystemState st;
  st.m = CovectorDensity(mesh);
  st.forms = {volume_form(mesh, sample(*mesh, [](const Point& x) { return 0.3 * std::sin(x[0]) * std::cos(x[2]); }))};
  st.produced = DiscreteForm(mesh, 3);
  const auto t = sys.rhs(st);

  const Field T = model->duals(st).T[0];
  Field expected = Field::Zero(mesh->node_count());
  Field grad2 = Field::Zero(mesh->node_count());
  for (int i = 0; i < 3; ++i) {
    const Field dT = partial(*mesh, T, i);
    expected += partial(*mesh, kappa / T * dT, i);
    grad2 += dT.square();
  }
  expected += kappa * grad2 / T.square();
  EXPECT_LE((t.forms[0][0] - expected).abs().maxCoeff(), 1e-13 * expected.abs().maxCoeff());
  EXPECT_LE((t.produced[0] - kappa * grad2 / T.square()).abs().maxCoeff(), 1e-15);
  EXPECT_EQ(t.m.max_abs(), 0.0);
}

TEST(General, ThreeSpeciesReactionConservesAnnihilatingCombinations) {
  const auto mesh = periodic_box(2, 8);
  ProcessDescriptor r{"reaction", AffinityKind::Discrete, 0, curie::Action::Right, Parity::Even, {1.0, -2.0, 1.0}, {}};
  ClosureSpec spec({r}, Eigen::MatrixXd::Constant(1, 1, 0.8));
  spec.validate(2);
  const AdvectedSystem sys(std::make_shared<MixtureModel>(3, 0.5, 1.0, 1.0), spec, {{{0, 1, 2}, {}}}, 2, {false});

  SystemState st;
  st.m = CovectorDensity(mesh);
  for (int i = 0; i < 3; ++i) {
    st.forms.push_back(volume_form(mesh, sample(*mesh, [i](const Point& x) {
      return 1.0 + 0.3 * std::sin(x[0] + i) * std::cos(x[1] - 0.5 * i) + 0.2 * i;
    })));
  }
  st.forms.push_back(DiscreteForm(mesh, 2));
  st.produced = DiscreteForm(mesh, 2);
  const auto initial = st;
  st = run(sys, st, 0.05, 20, Scheme::RK4);
  auto combo = [](const SystemState& x, double a, double b, double c) {
    return Field(a * x.forms[0][0] + b * x.forms[1][0] + c * x.forms[2][0]);
  };
  for (const auto& mu : std::vector<std::array<double, 3>>{{1, 0, -1}, {2, 1, 0}, {1, 1, 1}}) {
    EXPECT_LE((combo(st, mu[0], mu[1], mu[2]) - combo(initial, mu[0], mu[1], mu[2])).abs().maxCoeff(), 1e-13);
  }
  EXPECT_GT((combo(st, 1, 0, 0) - combo(initial, 1, 0, 0)).abs().maxCoeff(), 1e-3);
  EXPECT_GT(integrate(st.produced), 0.0);
}

TEST(General, ZeroFluxIsPureAdvection) {
  const auto mesh = periodic_box(3, 8);
  const auto sys = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 3), 3);
  auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  const double n1 = integrate(st.forms[0]), s = integrate(st.forms[3]);
  st = run(sys, st, 0.02, 10, Scheme::RK4);
  EXPECT_NEAR(integrate(st.forms[0]), n1, 1e-13 * std::abs(n1));
  EXPECT_NEAR(integrate(st.forms[3]), s, 1e-13 * std::abs(s));
  EXPECT_EQ(st.produced.max_abs(), 0.0);
}

// --- boundary conditions -----------------------------------------------------

namespace {

MeshPtr bounded_box(int n, int cells) {
  std::vector<int> c(static_cast<std::size_t>(n), cells);
  std::vector<double> h(static_cast<std::size_t>(n), 1.0 / cells);
  std::vector<bool> periodic(static_cast<std::size_t>(n), false);
  periodic[0] = true;
  return std::make_shared<const GridMesh>(c, h, periodic);
}

}  // namespace

TEST(Boundary, HomogeneousFluxesAndNormalField) {
  const int n = 3;
  const auto mesh = bounded_box(n, 8);
  InitialProfile prof;
  prof.field = {0.3, 0.2, -0.1};
  prof.velocity_amplitude = 0.2;
  prof.density_amplitude = 0.1;
  prof.entropy_amplitude = 0.2;
  prof.potential_amplitude = 0.05;
  prof.seed = 3;
  auto fs = make_initial_state(mesh, prof, 2.0, 1.0);
  const auto sys = make_mhd_system(mixing_eos(), 1.0, validated_mhd_closure(full_coefficients(n), n), n);
  auto st = fs.to_system();
  const auto ev = sys.evaluate(st);
  ASSERT_EQ(ev.boundary.residual.size(), 3u);
  for (double r : ev.boundary.residual) EXPECT_EQ(r, 0.0);
  // j_s . n = 0: every normal component of the heat flux vanishes on its face.
  const auto trace = boundary_trace(ev.fluxes[0]);
  for (const auto& face : trace.faces) {
    for (std::size_t c = 0; c < face.masks.size(); ++c) {
      if (face.masks[c] == (multi_index::full_mask(n) & ~(1u << face.axis))) {
        EXPECT_EQ(face.values[c].abs().maxCoeff(), 0.0);
      }
    }
  }
  const auto before = boundary_trace(st.forms[2]);
  st = run(sys, st, 2e-3, 5, Scheme::RK4);
  const auto after = boundary_trace(st.forms[2]);
  for (std::size_t f = 0; f < before.faces.size(); ++f) {
    const unsigned normal = multi_index::full_mask(n) & ~(1u << before.faces[f].axis);
    for (std::size_t c = 0; c < before.faces[f].masks.size(); ++c) {
      if (before.faces[f].masks[c] != normal) continue;
      EXPECT_LE((after.faces[f].values[c] - before.faces[f].values[c]).abs().maxCoeff(), 1e-14);
    }
  }
  for (Index idx = 0; idx < mesh->node_count(); ++idx) {
    if (!mesh->on_boundary(idx)) continue;
    for (int i = 0; i < n; ++i) EXPECT_EQ(st.m[i][idx], 0.0);
  }
}

TEST(Boundary, DirichletTemperatureKeepsEquilibrium) {
  const auto mesh = bounded_box(2, 8);
  const double T0 = 1.7, cv = 1.0;
  ProcessDescriptor heat{"heat", AffinityKind::Continuous, 1, curie::Action::Right, Parity::Even, {}, {}};
  ClosureSpec spec({heat}, Eigen::MatrixXd::Constant(1, 1, 0.4));
  spec.validate(2);
  const auto model = std::make_shared<MixtureModel>(0, 0.0, cv, 1.0);
  SystemState st;
  st.m = CovectorDensity(mesh);
  st.forms = {volume_form(mesh, Field::Constant(mesh->node_count(), cv * std::log(T0)))};
  st.produced = DiscreteForm(mesh, 2);

  const AdvectedSystem fixed(model, spec, {{{0}, {BoundaryKind::Dirichlet, {-T0}}}}, 2);
  EXPECT_LE(max_abs(fixed.rhs(st)), 1e-14);
  const AdvectedSystem hotter(model, spec, {{{0}, {BoundaryKind::Dirichlet, {-2.0 * T0}}}}, 2);
  const auto ev = hotter.evaluate(st);
  EXPECT_GT(ev.tangent.forms[0].max_abs(), 1e-2);
  EXPECT_EQ(ev.boundary.residual[0], 0.0);
  // Neumann data appear verbatim in the tangential flux trace.
  const AdvectedSystem fed(model, spec, {{{0}, {BoundaryKind::Neumann, {0.5, -0.25}}}}, 2);
  EXPECT_EQ(tangential_trace_error(fed.evaluate(st).fluxes[0], {0.5, -0.25}), 0.0);
  EXPECT_THROW(AdvectedSystem(model, spec, {{{0}, {BoundaryKind::Neumann, {1.0}}}}, 2).evaluate(st), BoundaryError);
}

// --- time integration --------------------------------------------------------

TEST(Integrator, ZeroTangentLeavesStateUnchanged) {
  const auto mesh = periodic_box(2, 6);
  const auto st = uniform_state(mesh, 1.0, 1.0, 0.1, {0.1, 0.2, 0.0}).to_system();
  const auto sys = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 2), 2);
  for (auto scheme : {Scheme::Euler, Scheme::Midpoint, Scheme::RK4}) {
    EXPECT_EQ(max_abs(difference(step([&](const SystemState& x) { return sys.rhs(x); }, st, 0.1, scheme), st)), 0.0);
  }
}

TEST(Integrator, EnergyDriftOrders) {
  const auto mesh = periodic_box(2, 8);
  const auto sys = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 2), 2);
  const auto st0 = analytic_fluid_state(mesh, 2.0, 1.0, 0.5).to_system();
  const double E0 = sys.energy(st0);
  auto drift = [&](Scheme scheme, double dt) {
    const int steps = static_cast<int>(std::lround(0.4 / dt));
    return std::abs(sys.energy(run(sys, st0, dt, steps, scheme)) - E0);
  };
  EXPECT_NEAR(slope(drift(Scheme::Euler, 0.004), drift(Scheme::Euler, 0.002)), 1.0, 0.15);
  // The fourth-order energy error term is small for this flow; the observed
  // rate sits between 4 and 6.
  const double rk4 = slope(drift(Scheme::RK4, 0.04), drift(Scheme::RK4, 0.02));
  EXPECT_GE(rk4, 3.6);
  EXPECT_LE(rk4, 6.0);

  // Self-convergence of the solution itself is fourth order.
  auto state_gap = [&](double dt) {
    const int steps = static_cast<int>(std::lround(0.4 / dt));
    return max_abs(difference(run(sys, st0, dt, steps, Scheme::RK4), run(sys, st0, dt / 2, 2 * steps, Scheme::RK4)));
  };
  EXPECT_NEAR(slope(state_gap(0.08), state_gap(0.04)), 4.0, 0.3);
}

TEST(Integrator, MidpointRichardson) {
  const auto mesh = periodic_box(2, 8);
  const auto sys = make_mhd_system(mixing_eos(), 1.0, validated_mhd_closure(full_coefficients(2), 2), 2);
  const auto st0 = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  const Tendency f = [&](const SystemState& x) { return sys.rhs(x); };
  auto gap = [&](double dt) {
    const auto full = step(f, st0, dt, Scheme::Midpoint);
    const auto half = step(f, step(f, st0, dt / 2, Scheme::Midpoint), dt / 2, Scheme::Midpoint);
    return max_abs(difference(full, half));
  };
  EXPECT_NEAR(slope(gap(0.02), gap(0.01)), 3.0, 0.2);
}

TEST(Integrator, BlowUpIsReported) {
  const auto mesh = periodic_box(2, 4);
  SystemState st;
  st.m = CovectorDensity(mesh);
  st.forms = {DiscreteForm(mesh, 2)};
  st.produced = DiscreteForm(mesh, 2);
  int calls = 0;
  Integrator integ(
      [&calls](const SystemState& x) {
        auto t = x.zeros_like();
        t.forms[0][0].setConstant(++calls > 1 ? std::numeric_limits<double>::infinity() : 1.0);
        return t;
      },
      Scheme::Euler);
  integ.advance(st, 0.1);
  try {
    integ.advance(st, 0.1);
    FAIL() << "expected BlowUpError";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.step(), 2);
  }
}

TEST(Integrator, CflEstimate) {
  const auto mesh = periodic_box(3, 8);
  const auto st = analytic_fluid_state(mesh, 2.0, 1.0).to_system();
  const auto ideal = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(MhdCoefficients{}, 3), 3);
  const double dt = cfl_estimate(ideal, st);
  EXPECT_GT(dt, 0.0);
  EXPECT_LT(dt, 0.4 * mesh->spacing(0));
  auto c = MhdCoefficients{};
  c.kappa_BB = 100.0;
  const auto stiff = make_mhd_system(EquationOfState{}, 1.0, validated_mhd_closure(c, 3), 3);
  EXPECT_LT(cfl_estimate(stiff, st), dt);
  EXPECT_EQ(parse_scheme("rk4"), Scheme::RK4);
  EXPECT_THROW(parse_scheme("leapfrog"), ConfigError);
}
