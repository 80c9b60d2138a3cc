#include "dforms/solver/initial_data.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dforms {

Field smooth_random_field(const GridMesh& mesh, int modes, std::uint64_t seed) {
  if (modes < 1) throw ConfigError("initial: modes must be at least 1");
  const int n = mesh.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Field f = Field::Zero(mesh.node_count());
  std::array<int, 3> k{0, 0, 0};
  const int span = 2 * modes + 1;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= span;
  for (int t = 0; t < total; ++t) {
    int rest = t;
    double k2 = 0.0;
    for (int i = 0; i < n; ++i) {
      k[i] = rest % span - modes;
      rest /= span;
      k2 += k[i] * k[i];
    }
    const double amp = gauss(rng) / (1.0 + k2);
    const double ph = phase(rng);
    if (k2 == 0.0) continue;
    for (Index idx = 0; idx < mesh.node_count(); ++idx) {
      const auto x = mesh.position(idx);
      double arg = ph;
      for (int i = 0; i < n; ++i) arg += 2.0 * std::numbers::pi * k[i] * x[i] / mesh.length(i);
      f[idx] += amp * std::cos(arg);
    }
  }
  const double m = f.abs().maxCoeff();
  return m > 0.0 ? Field(f / m) : f;
}

namespace {

// Vanishes on the boundary layers of bounded axes.
Field boundary_bump(const GridMesh& mesh) {
  Field w = Field::Ones(mesh.node_count());
  for (Index idx = 0; idx < mesh.node_count(); ++idx) {
    const auto x = mesh.position(idx);
    const auto ijk = mesh.unflatten(idx);
    for (int i = 0; i < mesh.dim(); ++i) {
      if (mesh.periodic(i)) continue;
      const bool edge = ijk[i] == 0 || ijk[i] == mesh.nodes(i) - 1;
      w[idx] *= edge ? 0.0 : std::sin(std::numbers::pi * x[i] / mesh.length(i));
    }
  }
  return w;
}

}  // namespace

FluidState make_initial_state(const MeshPtr& mesh, const InitialProfile& p, double M1, double M2) {
  const int n = mesh->dim();
  if (p.name != "random" && p.name != "sine_field") {
    throw ConfigError("initial.profile: unknown profile '" + p.name + "'");
  }
  if (!(p.n1 > 0.0) || !(p.n2 > 0.0)) throw ConfigError("initial: n1 and n2 must be positive");
  std::uint64_t seed = p.seed * 0x9E3779B97F4A7C15ull + 1;
  auto next_field = [&]() { return smooth_random_field(*mesh, p.modes, seed++); };

  FluidState st;
  Field n1 = Field::Constant(mesh->node_count(), p.n1);
  Field n2 = Field::Constant(mesh->node_count(), p.n2);
  if (p.density_amplitude != 0.0) {
    n1 *= 1.0 + p.density_amplitude * next_field();
    n2 *= 1.0 + p.density_amplitude * next_field();
  }
  Field s = Field::Constant(mesh->node_count(), p.s);
  if (p.entropy_amplitude != 0.0) s += p.entropy_amplitude * next_field();
  st.nu1 = volume_form(mesh, n1);
  st.nu2 = volume_form(mesh, n2);
  st.s = volume_form(mesh, s);
  st.sigma_prod = DiscreteForm(mesh, n);

  const Field rho = M1 * n1 + M2 * n2;
  const Field bump = boundary_bump(*mesh);
  const bool bounded = !mesh->fully_periodic();
  st.m = CovectorDensity(mesh);
  for (int i = 0; i < n; ++i) {
    Field u = Field::Constant(mesh->node_count(), p.velocity[static_cast<std::size_t>(i)]);
    if (p.velocity_amplitude != 0.0) u += p.velocity_amplitude * next_field();
    if (bounded) u *= bump;
    st.m[i] = rho * u;
  }

  VectorField B0(mesh);
  for (int i = 0; i < n; ++i) B0[i].setConstant(p.field[static_cast<std::size_t>(i)]);
  if (p.name == "sine_field") {
    B0[0] += p.field_amplitude * sample(*mesh, [&](const std::array<double, 3>& x) {
               return std::sin(2.0 * std::numbers::pi * x[1] / mesh->length(1));
             });
  }
  st.beta = flux_form(B0);
  if (p.potential_amplitude != 0.0) {
    DiscreteForm alpha(mesh, n - 2);
    for (int c = 0; c < alpha.component_count(); ++c) alpha[c] = p.potential_amplitude * next_field();
    st.beta += exterior_derivative(alpha);
  }
  return st;
}

}  // namespace dforms
