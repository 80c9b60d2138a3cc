#include "dforms/solver/integrator.hpp"

#include "dforms/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dforms {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Euler: return "euler";
    case Scheme::Midpoint: return "midpoint";
    case Scheme::RK4: return "rk4";
  }
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "euler") return Scheme::Euler;
  if (s == "midpoint") return Scheme::Midpoint;
  if (s == "rk4") return Scheme::RK4;
  throw ConfigError("unknown scheme '" + s + "' (expected euler, midpoint or rk4)");
}

namespace {

SystemState shifted(const SystemState& x, const SystemState& k, double a) {
  SystemState out = x;
  out.add_scaled(k, a);
  return out;
}

}  // namespace

SystemState step(const Tendency& f, const SystemState& state, double dt, Scheme scheme) {
  switch (scheme) {
    case Scheme::Euler:
      return shifted(state, f(state), dt);
    case Scheme::Midpoint:
      return shifted(state, f(shifted(state, f(state), 0.5 * dt)), dt);
    case Scheme::RK4: {
      const SystemState k1 = f(state);
      const SystemState k2 = f(shifted(state, k1, 0.5 * dt));
      const SystemState k3 = f(shifted(state, k2, 0.5 * dt));
      const SystemState k4 = f(shifted(state, k3, dt));
      SystemState out = state;
      out.add_scaled(k1, dt / 6.0).add_scaled(k2, dt / 3.0).add_scaled(k3, dt / 3.0).add_scaled(k4, dt / 6.0);
      return out;
    }
  }
  throw Error("unknown scheme");
}

void Integrator::advance(SystemState& state, double dt) {
  SystemState next = step(f_, state, dt, scheme_);
  if (!next.all_finite()) {
    throw BlowUpError("nonfinite state after step " + std::to_string(steps_ + 1) + " at t = " +
                          std::to_string(time_ + dt),
                      steps_ + 1, time_ + dt);
  }
  state = std::move(next);
  ++steps_;
  time_ += dt;
}

double cfl_estimate(const AdvectedSystem& system, const SystemState& state) {
  const auto& mesh = state.mesh();
  double h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.dim(); ++i) h = std::min(h, mesh.spacing(i));

  const auto duals = system.model().duals(state);
  Field u2 = Field::Zero(mesh.node_count());
  for (int i = 0; i < mesh.dim(); ++i) u2 += duals.u[i].square();
  Field speed2 = Field::Zero(mesh.node_count());
  double mu0 = 1.0;
  if (const auto* mhd = dynamic_cast<const MhdModel*>(&system.model())) {
    const auto fs = FluidState::from_system(state);
    const auto th = mhd->eos().evaluate(fs.nu1[0], fs.nu2[0], fs.s[0]);
    mu0 = mhd->mu0();
    const auto B = magnetic_field(fs.beta);
    Field b2 = Field::Zero(mesh.node_count());
    for (int i = 0; i < mesh.dim(); ++i) b2 += B[i].square();
    speed2 = (5.0 / 3.0) * th.p / th.rho + b2 / (mu0 * th.rho);
  }
  const double wave = (u2.sqrt() + speed2.sqrt()).maxCoeff();
  double dt = wave > 0.0 ? 0.4 * h / wave : std::numeric_limits<double>::infinity();

  // Diffusive limits: each diagonal coefficient acts as a diffusivity.
  const auto& K = system.closure().kappa();
  double diffusivity = 0.0;
  const double rho_min = duals.rho.minCoeff();
  const double T_max = duals.T[0].maxCoeff();
  for (int a = 0; a < system.closure().size(); ++a) {
    const auto& p = system.closure().processes()[static_cast<std::size_t>(a)];
    if (p.kind != AffinityKind::Continuous) continue;
    const double k = std::abs(K(a, a));
    diffusivity = std::max(diffusivity, p.name == "resistive" ? k / mu0 : k * T_max / rho_min);
  }
  const auto& v = system.closure().viscosity();
  diffusivity = std::max(diffusivity, std::max({v.homothety, v.traceless, v.skew}) / rho_min);
  if (diffusivity > 0.0) dt = std::min(dt, 0.4 * h * h / (2.0 * mesh.dim() * diffusivity));
  return dt;
}

}  // namespace dforms
