#include "dforms/solver/advected_system.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/operators.hpp"

#include <string>

namespace dforms {

AdvectedSystem::AdvectedSystem(std::shared_ptr<const Model> model, ClosureSpec closure,
                               std::vector<ProcessBinding> bindings, int n, SystemOptions options)
    : model_(std::move(model)),
      closure_(std::move(closure)),
      bindings_(std::move(bindings)),
      n_(n),
      options_(options) {
  if (!model_) throw Error("advected system without a model");
  if (!closure_.validated()) throw ClosureError("closure has not been validated");
  if (closure_.validated_dim() != n) {
    throw ClosureError("closure validated for n = " + std::to_string(closure_.validated_dim()) +
                       ", system has n = " + std::to_string(n));
  }
  quantities_ = model_->quantities(n);
  if (bindings_.size() != static_cast<std::size_t>(closure_.size())) {
    throw ClosureError("expected one binding per closure process");
  }
  for (int a = 0; a < closure_.size(); ++a) {
    const auto& p = closure_.processes()[static_cast<std::size_t>(a)];
    const auto& qs = bindings_[static_cast<std::size_t>(a)].quantities;
    if (qs.empty() || qs.size() != lambdas(a).size()) {
      throw ClosureError("process '" + p.name + "' binds " + std::to_string(qs.size()) + " quantities but has " +
                         std::to_string(lambdas(a).size()) + " lambdas");
    }
    for (int q : qs) {
      if (q < 0 || q >= static_cast<int>(quantities_.size())) {
        throw ClosureError("process '" + p.name + "' binds unknown quantity " + std::to_string(q));
      }
      const int k = quantities_[static_cast<std::size_t>(q)].degree;
      const int expected = p.kind == AffinityKind::Continuous ? n - k + 1 : n - k;
      if (p.degree != expected) {
        throw DegreeError("process '" + p.name + "' has affinity degree " + std::to_string(p.degree) +
                          " but quantity '" + quantities_[static_cast<std::size_t>(q)].name + "' of degree " +
                          std::to_string(k) + " needs " + std::to_string(expected));
      }
    }
    const auto& bc = bindings_[static_cast<std::size_t>(a)].bc;
    if (p.kind == AffinityKind::Discrete && bc.kind != BoundaryKind::Homogeneous) {
      throw BoundaryError("process '" + p.name + "' is discrete and takes no boundary data");
    }
  }
}

std::vector<double> AdvectedSystem::lambdas(int a) const {
  const auto& l = closure_.processes()[static_cast<std::size_t>(a)].lambdas;
  return l.empty() ? std::vector<double>{1.0} : l;
}

double AdvectedSystem::energy(const SystemState& state) const {
  return integrate(state.mesh(), model_->energy_density(state));
}

Evaluation AdvectedSystem::evaluate(const SystemState& state) const {
  const auto& mesh_ptr = state.mesh_ptr();
  const auto& mesh = *mesh_ptr;
  if (mesh.dim() != n_) throw MeshError("state dimension does not match the system");
  if (state.forms.size() != quantities_.size()) throw Error("state does not match the model layout");
  const bool bounded = !mesh.fully_periodic();

  Evaluation ev;
  ev.duals = model_->duals(state);
  const auto& b = ev.duals.b;
  const auto& u = ev.duals.u;

  // Affinities, with Dirichlet data imposed on the combined dual.
  std::vector<DiscreteForm> combined;
  for (int a = 0; a < closure_.size(); ++a) {
    const auto& p = closure_.processes()[static_cast<std::size_t>(a)];
    const auto& bind = bindings_[static_cast<std::size_t>(a)];
    const auto lam = lambdas(a);
    DiscreteForm c(mesh_ptr, b[static_cast<std::size_t>(bind.quantities[0])].degree());
    for (std::size_t i = 0; i < lam.size(); ++i) c.add_scaled(b[static_cast<std::size_t>(bind.quantities[i])], lam[i]);
    if (p.kind == AffinityKind::Continuous) {
      if (bounded && bind.bc.kind == BoundaryKind::Dirichlet) set_tangential_trace(c, bind.bc.value);
      ev.affinities.push_back(exterior_derivative(c));
    } else {
      ev.affinities.push_back(c);
    }
    combined.push_back(std::move(c));
  }

  Field scale;
  const Field* scale_ptr = nullptr;
  if (closure_.coefficient_hook()) {
    scale = closure_.coefficient_hook()(ev.duals.T[0], ev.duals.rho);
    if ((scale < 0.0).any()) throw ClosureError("coefficient hook returned a negative multiplier");
    scale_ptr = &scale;
  }
  ev.fluxes = apply_closure(closure_, ev.affinities, scale_ptr);

  if (bounded) {
    for (int a = 0; a < closure_.size(); ++a) {
      const auto& p = closure_.processes()[static_cast<std::size_t>(a)];
      if (p.kind != AffinityKind::Continuous) continue;
      const auto& bc = bindings_[static_cast<std::size_t>(a)].bc;
      double residual = 0.0;
      if (bc.kind == BoundaryKind::Dirichlet) {
        residual = tangential_trace_error(combined[static_cast<std::size_t>(a)], bc.value);
      } else {
        set_tangential_trace(ev.fluxes[static_cast<std::size_t>(a)], bc.value);
        residual = tangential_trace_error(ev.fluxes[static_cast<std::size_t>(a)], bc.value);
      }
      ev.boundary.process.push_back(p.name);
      ev.boundary.kind.push_back(to_string(bc.kind));
      ev.boundary.residual.push_back(residual);
    }
  }

  SystemState& t = ev.tangent;
  t = state.zeros_like();
  const bool moving = u.max_abs() > 0.0;
  for (std::size_t q = 0; q < state.forms.size(); ++q) {
    if (moving) t.forms[q] -= lie_derivative(u, state.forms[q]);
  }
  for (int a = 0; a < closure_.size(); ++a) {
    const auto& p = closure_.processes()[static_cast<std::size_t>(a)];
    const auto& bind = bindings_[static_cast<std::size_t>(a)];
    const auto lam = lambdas(a);
    const auto& j = ev.fluxes[static_cast<std::size_t>(a)];
    if (p.kind == AffinityKind::Continuous) {
      const int k = quantities_[static_cast<std::size_t>(bind.quantities[0])].degree;
      const double sign = (n_ - k + 1) % 2 == 0 ? 1.0 : -1.0;
      const DiscreteForm dj = exterior_derivative(j);
      for (std::size_t i = 0; i < lam.size(); ++i) t.forms[static_cast<std::size_t>(bind.quantities[i])].add_scaled(dj, sign * lam[i]);
    } else {
      for (std::size_t i = 0; i < lam.size(); ++i) t.forms[static_cast<std::size_t>(bind.quantities[i])].add_scaled(j, lam[i]);
    }
  }

  // Entropy production.
  Field P = Field::Zero(mesh.node_count());
  for (std::size_t a = 0; a < ev.fluxes.size(); ++a) P += wedge(ev.affinities[a], ev.fluxes[a])[0];
  if (options_.evolve_momentum) {
    ev.grad_u = velocity_gradient(u);
    ev.sigma = viscous_stress(ev.grad_u, closure_.viscosity(), scale_ptr);
    P += contract(ev.sigma, ev.grad_u);
  }
  P /= ev.duals.T[0];
  ev.production = volume_form(mesh_ptr, P);
  t.forms[static_cast<std::size_t>(model_->entropy_index())] += ev.production;
  t.produced = ev.production;
  if (moving) t.produced -= lie_derivative(u, state.produced);

  if (options_.evolve_momentum) {
    CovectorDensity mdot(mesh_ptr);
    if (moving) mdot -= lie_derivative(u, state.m);
    for (std::size_t q = 0; q < state.forms.size(); ++q) mdot += diamond(b[q], state.forms[q]);
    mdot += tensor_divergence(ev.sigma);
    if (bounded) {
      for (Index idx = 0; idx < mesh.node_count(); ++idx) {
        if (!mesh.on_boundary(idx)) continue;
        for (int i = 0; i < n_; ++i) mdot[i][idx] = 0.0;
      }
    }
    t.m = std::move(mdot);
  }
  return ev;
}

std::vector<ProcessBinding> mhd_bindings(const ClosureSpec& closure) {
  std::vector<ProcessBinding> out;
  for (const auto& p : closure.processes()) {
    if (p.name == "heat") {
      out.push_back({{3}, {}});
    } else if (p.name == "diffusion" || p.name == "reaction") {
      out.push_back({{0, 1}, {}});
    } else if (p.name == "resistive") {
      out.push_back({{2}, {}});
    } else {
      throw ClosureError("no MHD binding for process '" + p.name + "'");
    }
  }
  return out;
}

AdvectedSystem make_mhd_system(const EquationOfState& eos, double mu0, const ClosureSpec& closure, int n,
                               std::vector<BoundaryCondition> bcs, SystemOptions options) {
  auto bindings = mhd_bindings(closure);
  if (!bcs.empty()) {
    if (bcs.size() != bindings.size()) throw BoundaryError("expected one boundary condition per process");
    for (std::size_t a = 0; a < bcs.size(); ++a) bindings[a].bc = bcs[a];
  }
  return AdvectedSystem(std::make_shared<MhdModel>(eos, mu0), closure, std::move(bindings), n, options);
}

CovectorDensity physical_momentum_rhs(const FluidState& state, const EquationOfState& eos, double mu0,
                                      const ViscosityCoefficients& viscosity) {
  const auto& mesh_ptr = state.mesh_ptr();
  const auto& mesh = *mesh_ptr;
  const int n = mesh.dim();
  const auto th = eos.evaluate(state.nu1[0], state.nu2[0], state.s[0]);
  VectorField u(mesh_ptr);
  for (int i = 0; i < n; ++i) u[i] = state.m[i] / th.rho;
  const VectorField B = magnetic_field(state.beta);

  CovectorDensity out(mesh_ptr);
  Field divB = Field::Zero(mesh.node_count());
  for (int j = 0; j < n; ++j) divB += partial(mesh, B[j], j);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[i] -= partial(mesh, state.m[i] * u[j], j);
    out[i] -= partial(mesh, th.p, i);
    out[i] += divB * B[i] / mu0;
  }
  // (curl H) x B; in 2D curl H is the scalar w = D_0 H_1 - D_1 H_0.
  if (n == 2) {
    const Field w = (partial(mesh, B[1], 0) - partial(mesh, B[0], 1)) / mu0;
    out[0] -= w * B[1];
    out[1] += w * B[0];
  } else {
    const Field c0 = (partial(mesh, B[2], 1) - partial(mesh, B[1], 2)) / mu0;
    const Field c1 = (partial(mesh, B[0], 2) - partial(mesh, B[2], 0)) / mu0;
    const Field c2 = (partial(mesh, B[1], 0) - partial(mesh, B[0], 1)) / mu0;
    out[0] += c1 * B[2] - c2 * B[1];
    out[1] += c2 * B[0] - c0 * B[2];
    out[2] += c0 * B[1] - c1 * B[0];
  }
  out += tensor_divergence(viscous_stress(velocity_gradient(u), viscosity));
  return out;
}

}  // namespace dforms
