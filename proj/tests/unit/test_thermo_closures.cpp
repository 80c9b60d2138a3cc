#include "support/fixtures.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/operators.hpp"
#include "dforms/thermo/closure.hpp"
#include "dforms/thermo/viscosity.hpp"

#include <gtest/gtest.h>

using namespace dforms;
using namespace dforms::testing;

namespace {

using Vec3 = std::array<double, 3>;

MhdCoefficients sample_coefficients() {
  MhdCoefficients c;
  c.kappa_ss = 0.7;
  c.kappa_sn = 0.2;
  c.kappa_nn = 0.5;
  c.kappa_Bs = 0.3;
  c.kappa_Bn = -0.4;
  c.kappa_BB = 0.9;
  c.kappa_nu = 0.25;
  c.viscosity = {0.1, 0.2, 0.0};
  return c;
}

std::vector<DiscreteForm> random_affinities(const ClosureSpec& spec, const MeshPtr& mesh, std::mt19937_64& rng) {
  std::vector<DiscreteForm> xs;
  for (const auto& p : spec.processes()) xs.push_back(random_form(mesh, p.degree, rng));
  return xs;
}

double production_integral(const std::vector<DiscreteForm>& xs, const std::vector<DiscreteForm>& js) {
  double total = 0.0;
  for (std::size_t a = 0; a < xs.size(); ++a) total += integrate(wedge(xs[a], js[a]));
  return total;
}

}  // namespace

TEST(Affinity, ContinuousIsExteriorDerivative) {
  const auto mesh = periodic_box(3, 8);
  DiscreteForm T(mesh, 0);
  T[0].setConstant(-2.0);
  EXPECT_EQ(affinity_continuous(T).max_abs(), 0.0);

  std::mt19937_64 rng(1);
  const auto x = affinity_continuous(random_form(mesh, 1, rng));
  EXPECT_LE(affinity_continuous(x).max_abs(), 1e-12 * x.max_abs() * 8);
}

TEST(Affinity, ResistiveAffinityIsMinusCurlH) {
  const auto mesh = periodic_box(3, 32);
  const auto H = VectorField::from_functions(
      mesh, {[](const Vec3& x) { return std::sin(x[1]); }, [](const Vec3& x) { return std::cos(x[2]); },
             [](const Vec3&) { return 0.3; }});
  const auto x = affinity_continuous(-flat(H));
  // curl H = (sin z, 0, -cos y)
  const auto expected = flux_form(VectorField::from_functions(
      mesh, {[](const Vec3& x) { return -std::sin(x[2]); }, [](const Vec3&) { return 0.0; },
             [](const Vec3& x) { return std::cos(x[1]); }}));
  EXPECT_LT(max_diff(x, expected), 1e-2);
}

TEST(Affinity, DiscreteCombination) {
  const auto mesh = periodic_box(3, 4);
  std::mt19937_64 rng(2);
  const auto a = random_form(mesh, 0, rng);
  const auto b = random_form(mesh, 0, rng);
  EXPECT_EQ(affinity_discrete({a, a}, {1.0, -1.0}).max_abs(), 0.0);
  EXPECT_EQ(max_diff(affinity_discrete({a}, {1.0}), a), 0.0);
  const double M1 = 2.0, M2 = 1.0;
  const auto mu = affinity_discrete({a, b}, {1.0 / M1, -1.0 / M2});
  EXPECT_LE((mu[0] - (a[0] / M1 - b[0] / M2)).abs().maxCoeff(), 1e-16);
  EXPECT_THROW(affinity_discrete({a, random_form(mesh, 1, rng)}, {1.0, 1.0}), DegreeError);
}

TEST(Coupling, OperatorSelection) {
  using curie::Action;
  const int n = 3;
  ProcessDescriptor heat{"heat", AffinityKind::Continuous, 1, Action::Right, Parity::Even, {}, {}};
  ProcessDescriptor res{"res", AffinityKind::Continuous, 2, Action::Left, Parity::Odd, {}, {}};
  ProcessDescriptor vol{"vol", AffinityKind::Continuous, 3, Action::Left, Parity::Even, {}, {}};
  EXPECT_EQ(coupling_operator(heat, heat, n), CouplingOperator::Hodge);
  EXPECT_EQ(coupling_operator(heat, res, n), CouplingOperator::Identity);
  EXPECT_EQ(coupling_operator(res, heat, n), CouplingOperator::Identity);
  EXPECT_EQ(coupling_operator(heat, vol, n), CouplingOperator::None);
}

TEST(Onsager, MhdMatrixPasses) {
  auto spec = mhd_closure(sample_coefficients(), 2.0, 1.0);
  const auto report = spec.validate(3);
  EXPECT_TRUE(report.passed);
  EXPECT_TRUE(spec.validated());
  EXPECT_TRUE(report.warnings.empty());
  EXPECT_NE(report.to_json().find("\"passed\": true"), std::string::npos);
}

TEST(Onsager, SymmetricCrossParityEntryFails) {
  auto spec = mhd_closure(sample_coefficients(), 2.0, 1.0);
  Eigen::MatrixXd K = spec.kappa();
  K(0, 2) = K(2, 0);  // entered symmetric across A+/A-
  ClosureSpec bad(spec.processes(), K, spec.viscosity());
  const auto report = validate_onsager(bad, 3);
  EXPECT_FALSE(report.passed);
  ASSERT_EQ(report.reciprocity.size(), 1u);
  EXPECT_EQ(report.reciprocity[0].alpha, "heat");
  EXPECT_EQ(report.reciprocity[0].beta, "resistive");
  EXPECT_TRUE(report.reciprocity[0].cross_parity);
  EXPECT_THROW(bad.validate(3), ClosureError);
  EXPECT_FALSE(bad.validated());
}

TEST(Onsager, NegativeDiagonalFailsPositivity) {
  auto c = sample_coefficients();
  c.kappa_ss = -1.0;
  const auto report = validate_onsager(mhd_closure(c, 2.0, 1.0), 3);
  EXPECT_FALSE(report.passed);
  bool even_failed = false;
  for (const auto& b : report.blocks)
    if (b.parity == Parity::Even && !b.psd) even_failed = true;
  EXPECT_TRUE(even_failed);
}

TEST(Onsager, CrossCoefficientBoundIsTheDeterminantCondition) {
  auto c = sample_coefficients();
  c.kappa_sn = std::sqrt(c.kappa_ss * c.kappa_nn) * 1.01;
  EXPECT_FALSE(validate_onsager(mhd_closure(c, 2.0, 1.0), 3).passed);
  c.kappa_sn = std::sqrt(c.kappa_ss * c.kappa_nn) * 0.99;
  EXPECT_TRUE(validate_onsager(mhd_closure(c, 2.0, 1.0), 3).passed);
}

TEST(Onsager, CurieRejectsDegreeOneToThree) {
  using curie::Action;
  std::vector<ProcessDescriptor> procs = {
      {"a", AffinityKind::Continuous, 1, Action::Right, Parity::Even, {}, {}},
      {"b", AffinityKind::Continuous, 3, Action::Left, Parity::Even, {}, {}},
  };
  Eigen::Matrix2d K;
  K << 1.0, 0.1, 0.1, 1.0;
  const auto report = validate_onsager(ClosureSpec(procs, K), 3);
  EXPECT_FALSE(report.passed);
  EXPECT_EQ(report.curie_violations.size(), 2u);
}

TEST(Onsager, MassBalanceIsAWarning) {
  using curie::Action;
  ProcessDescriptor r{"r", AffinityKind::Discrete, 0, Action::Right, Parity::Even, {1.0, -1.0}, {}};
  ClosureSpec spec({r}, Eigen::MatrixXd::Identity(1, 1));
  spec.set_molar_masses({2.0, 1.0});
  const auto report = spec.validate(3);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(Onsager, NegativeViscosityFails) {
  auto c = sample_coefficients();
  c.viscosity.skew = -0.1;
  EXPECT_FALSE(validate_onsager(mhd_closure(c, 2.0, 1.0), 3).passed);
}

TEST(ApplyClosure, MatchesMhdDisplay) {
  const auto mesh = periodic_box(3, 6);
  auto spec = mhd_closure(sample_coefficients(), 2.0, 1.0);
  spec.validate(3);
  std::mt19937_64 rng(3);
  const auto xs = random_affinities(spec, mesh, rng);
  const auto js = apply_closure(spec, xs);
  const auto c = sample_coefficients();
  const auto js_oracle = c.kappa_ss * hodge(xs[0]) + c.kappa_sn * hodge(xs[1]) - c.kappa_Bs * xs[2];
  const auto jn_oracle = c.kappa_sn * hodge(xs[0]) + c.kappa_nn * hodge(xs[1]) - c.kappa_Bn * xs[2];
  const auto jB_oracle = c.kappa_Bs * xs[0] + c.kappa_Bn * xs[1] + c.kappa_BB * hodge(xs[2]);
  const auto jr_oracle = c.kappa_nu * hodge(xs[3]);
  EXPECT_LE(max_diff(js[0], js_oracle), 1e-15);
  EXPECT_LE(max_diff(js[1], jn_oracle), 1e-15);
  EXPECT_LE(max_diff(js[2], jB_oracle), 1e-15);
  EXPECT_LE(max_diff(js[3], jr_oracle), 1e-15);
  EXPECT_EQ(js[0].degree(), 2);
  EXPECT_EQ(js[2].degree(), 1);
  EXPECT_EQ(js[3].degree(), 3);
}

TEST(ApplyClosure, RequiresValidationAndHandlesZero) {
  const auto mesh = periodic_box(3, 4);
  auto spec = mhd_closure(MhdCoefficients{}, 2.0, 1.0);
  std::mt19937_64 rng(4);
  const auto xs = random_affinities(spec, mesh, rng);
  EXPECT_THROW(apply_closure(spec, xs), ClosureError);
  spec.validate(3);
  for (const auto& j : apply_closure(spec, xs)) EXPECT_EQ(j.max_abs(), 0.0);
  auto wrong = xs;
  wrong[0] = random_form(mesh, 2, rng);
  EXPECT_THROW(apply_closure(spec, wrong), DegreeError);
}

TEST(ApplyClosure, LinearInAffinities) {
  const auto mesh = periodic_box(3, 5);
  auto spec = mhd_closure(sample_coefficients(), 2.0, 1.0);
  spec.validate(3);
  std::mt19937_64 rng(5);
  const auto x = random_affinities(spec, mesh, rng);
  const auto y = random_affinities(spec, mesh, rng);
  std::vector<DiscreteForm> z;
  for (std::size_t a = 0; a < x.size(); ++a) z.push_back(2.0 * x[a] - 3.0 * y[a]);
  const auto jx = apply_closure(spec, x), jy = apply_closure(spec, y), jz = apply_closure(spec, z);
  for (std::size_t a = 0; a < x.size(); ++a)
    EXPECT_LE(max_diff(jz[a], 2.0 * jx[a] - 3.0 * jy[a]), 1e-14 * (1.0 + jz[a].max_abs()));
}

TEST(ApplyClosure, AnisotropicOperatorAndHook) {
  const auto mesh = periodic_box(3, 4);
  auto iso = mhd_closure(sample_coefficients(), 2.0, 1.0);
  iso.validate(3);
  auto aniso = mhd_closure(sample_coefficients(), 2.0, 1.0);
  // Heat self-coupling written out as a fiber matrix: kappa_ss times the Hodge permutation.
  Eigen::Matrix3d star;
  star << 0, 0, 1, 0, -1, 0, 1, 0, 0;
  aniso.set_fiber_operator(0, 0, 0.7 * star);
  aniso.validate(3);
  std::mt19937_64 rng(6);
  const auto xs = random_affinities(iso, mesh, rng);
  const auto a = apply_closure(iso, xs);
  const auto b = apply_closure(aniso, xs);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LE(max_diff(a[k], b[k]), 1e-15);

  // A non-symmetric (rotated) conductivity breaks reciprocity.
  Eigen::Matrix3d twisted = star;
  twisted(0, 1) = 0.5;
  aniso.set_fiber_operator(0, 0, twisted);
  EXPECT_FALSE(validate_onsager(aniso, 3).passed);

  const Field scale = Field::Constant(mesh->node_count(), 2.0);
  const auto scaled = apply_closure(iso, xs, &scale);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LE(max_diff(scaled[k], 2.0 * a[k]), 1e-15);
}

TEST(EntropyProduction, PositiveForValidatedClosures) {
  const auto mesh = periodic_box(3, 6);
  auto spec = mhd_closure(sample_coefficients(), 2.0, 1.0);
  spec.validate(3);
  std::mt19937_64 rng(7);
  DiscreteForm T(mesh, 0);
  T[0] = random_field(*mesh, rng) + 1.5;
  for (int trial = 0; trial < 5; ++trial) {
    const auto xs = random_affinities(spec, mesh, rng);
    const auto P = entropy_production_density(xs, apply_closure(spec, xs), T);
    double xmax = 0.0;
    for (const auto& x : xs) xmax = std::max(xmax, x.max_abs());
    EXPECT_GE(P[0].minCoeff(), -1e-12 * xmax * xmax);
  }
}

TEST(EntropyProduction, IsotropicQuadraticForm) {
  const auto mesh = periodic_box(3, 5);
  std::mt19937_64 rng(8);
  DiscreteForm T(mesh, 0);
  T[0].setOnes();
  for (int k = 0; k <= 3; ++k) {
    const auto x = random_form(mesh, k, rng);
    const double kappa = 0.8;
    const auto P = entropy_production_density({x}, {kappa * hodge(x)}, T);
    Field g = Field::Zero(mesh->node_count());
    for (int c = 0; c < x.component_count(); ++c) g += x[c].square();
    EXPECT_LE((P[0] - kappa * g).abs().maxCoeff(), 1e-14);
  }
  DiscreteForm cold(mesh, 0);
  EXPECT_THROW(entropy_production_density({}, {}, cold), ThermodynamicDomainError);
}

TEST(EntropyProduction, CrossParitySkewCouplingDoesNotContribute) {
  const auto mesh = periodic_box(3, 6);
  auto base = sample_coefficients();
  base.kappa_Bs = 0.0;
  auto skew = base;
  skew.kappa_Bs = 1.0;
  auto a = mhd_closure(base, 2.0, 1.0);
  auto b = mhd_closure(skew, 2.0, 1.0);
  a.validate(3);
  b.validate(3);
  std::mt19937_64 rng(9);
  const auto xs = random_affinities(a, mesh, rng);
  const auto ja = apply_closure(a, xs);
  const auto jb = apply_closure(b, xs);
  const double pa = production_integral(xs, ja);
  const double pb = production_integral(xs, jb);
  EXPECT_LE(std::abs(pa - pb), 1e-12 * std::abs(pa));
  EXPECT_GT(max_diff(ja[0], jb[0]), 0.5);
}

TEST(EntropyProduction, OnlySymmetricPartMatters) {
  const auto mesh = periodic_box(3, 6);
  auto spec = mhd_closure(sample_coefficients(), 2.0, 1.0);
  spec.validate(3);
  // Parity-blockwise symmetric part: drop the antisymmetric cross-parity entries.
  auto sym_c = sample_coefficients();
  sym_c.kappa_Bs = sym_c.kappa_Bn = 0.0;
  auto sym = mhd_closure(sym_c, 2.0, 1.0);
  sym.validate(3);
  std::mt19937_64 rng(10);
  const auto xs = random_affinities(spec, mesh, rng);
  const double p1 = production_integral(xs, apply_closure(spec, xs));
  const double p2 = production_integral(xs, apply_closure(sym, xs));
  EXPECT_LE(std::abs(p1 - p2), 1e-12 * std::abs(p1));
}

TEST(Viscosity, ProjectorAlgebra) {
  const auto mesh = periodic_box(3, 4);
  std::mt19937_64 rng(11);
  TensorField t(mesh);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = random_field(*mesh, rng);
  const auto h = homothety_part(t), s = traceless_part(t), a = skew_part(t);
  const auto sum = h + s + a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_LE((sum(i, j) - t(i, j)).abs().maxCoeff(), 1e-15);
  EXPECT_LE(contract(h, s).abs().maxCoeff(), 1e-15);
  EXPECT_LE(contract(h, a).abs().maxCoeff(), 1e-15);
  EXPECT_LE(contract(s, a).abs().maxCoeff(), 1e-15);
  const auto hh = homothety_part(h), ss = traceless_part(s), aa = skew_part(a);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_LE((hh(i, j) - h(i, j)).abs().maxCoeff(), 1e-15);
      EXPECT_LE((ss(i, j) - s(i, j)).abs().maxCoeff(), 1e-15);
      EXPECT_LE((aa(i, j) - a(i, j)).abs().maxCoeff(), 1e-15);
      EXPECT_LE(traceless_part(h)(i, j).abs().maxCoeff(), 1e-15);
      EXPECT_LE(skew_part(s)(i, j).abs().maxCoeff(), 1e-15);
    }
}

TEST(Viscosity, DilationRotationAndDissipation) {
  const auto mesh = periodic_box(3, 4);
  TensorField dilation(mesh);
  for (int i = 0; i < 3; ++i) dilation(i, i).setOnes();
  const ViscosityCoefficients c{0.4, 0.3, 0.0};
  const auto s1 = viscous_stress(dilation, c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_LE((s1(i, j) - (i == j ? 0.4 : 0.0)).abs().maxCoeff(), 1e-15);

  TensorField rotation(mesh);
  rotation(0, 1).setConstant(1.0);
  rotation(1, 0).setConstant(-1.0);
  EXPECT_EQ(viscous_stress(rotation, c).max_abs(), 0.0);

  std::mt19937_64 rng(12);
  TensorField g(mesh);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = random_field(*mesh, rng);
  const auto sigma = viscous_stress(g, {0.2, 0.5, 0.3});
  EXPECT_GE(contract(sigma, g).minCoeff(), 0.0);
}

TEST(Viscosity, DivergenceAdjointAndShear) {
  const auto mesh = periodic_box(3, 8);
  std::mt19937_64 rng(13);
  TensorField constant(mesh);
  constant(0, 2).setConstant(3.0);
  EXPECT_EQ(tensor_divergence(constant).max_abs(), 0.0);

  const auto u = random_vector(mesh, rng);
  TensorField sigma(mesh);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sigma(i, j) = random_field(*mesh, rng);
  const double lhs = pairing(tensor_divergence(sigma), u);
  const double rhs = -integrate(*mesh, contract(velocity_gradient(u), sigma));
  EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));

  const auto box = std::make_shared<const GridMesh>(std::vector<int>{6, 6, 6}, std::vector<double>{0.2, 0.2, 0.2},
                                                    std::vector<bool>{false, false, false});
  const auto shear = VectorField::from_functions(box, {[](const Vec3& x) { return x[1]; },
                                                       [](const Vec3&) { return 0.0; },
                                                       [](const Vec3&) { return 0.0; }});
  const auto div = tensor_divergence(viscous_stress(velocity_gradient(shear), {0.0, 1.0, 0.0}));
  EXPECT_LE(div.max_abs(), 1e-12);
}
