#pragma once

#include "dforms/solver/boundary.hpp"
#include "dforms/solver/model.hpp"
#include "dforms/thermo/closure.hpp"
#include "dforms/thermo/viscosity.hpp"

#include <memory>
#include <vector>

namespace dforms {

/// Which quantities a closure process acts on, in the order of the process
/// lambdas, plus its boundary condition (used on bounded meshes only).
struct ProcessBinding {
  std::vector<int> quantities;
  BoundaryCondition bc;
};

struct SystemOptions {
  /// Evolve m with the diamond assembly; otherwise the flow is frozen.
  bool evolve_momentum = true;
};

/// Everything assembled during one right-hand-side evaluation.
struct Evaluation {
  ModelDuals duals;
  std::vector<DiscreteForm> affinities;
  std::vector<DiscreteForm> fluxes;
  TensorField grad_u;
  TensorField sigma;
  /// Entropy production density (n-form), (sum x ^ j + sigma : grad u) / T.
  DiscreteForm production;
  BoundaryReport boundary;
  SystemState tangent;
};

/// Semi-discrete dynamics of N advected forms with discrete and continuous
/// irreversible fluxes:
///   dm/dt = -L_u m + sum_q b_q <> a_q + div sigma
///   D_t a_q = sum_alpha lambda_q j_alpha                      (discrete)
///           + sum_alpha lambda_q (-1)^(n-k+1) d j_alpha        (continuous)
///   D_t s  += production,  D_t sigma_prod = production.
/// On periodic meshes the total energy is conserved exactly by the spatial
/// discretization for any closure.
class AdvectedSystem {
 public:
  AdvectedSystem(std::shared_ptr<const Model> model, ClosureSpec closure, std::vector<ProcessBinding> bindings,
                 int n, SystemOptions options = {});

  Evaluation evaluate(const SystemState& state) const;
  SystemState rhs(const SystemState& state) const { return evaluate(state).tangent; }
  double energy(const SystemState& state) const;

  const Model& model() const { return *model_; }
  const std::shared_ptr<const Model>& model_ptr() const { return model_; }
  const ClosureSpec& closure() const { return closure_; }
  const std::vector<ProcessBinding>& bindings() const { return bindings_; }
  const SystemOptions& options() const { return options_; }
  int dim() const { return n_; }
  /// Lambdas of process a with the empty default expanded.
  std::vector<double> lambdas(int a) const;

 private:
  std::shared_ptr<const Model> model_;
  ClosureSpec closure_;
  std::vector<ProcessBinding> bindings_;
  int n_;
  SystemOptions options_;
  std::vector<Quantity> quantities_;
};

/// Default bindings of the MHD closure: heat -> s, diffusion and reaction ->
/// (nu1, nu2), resistive -> beta.
std::vector<ProcessBinding> mhd_bindings(const ClosureSpec& closure);

AdvectedSystem make_mhd_system(const EquationOfState& eos, double mu0, const ClosureSpec& closure, int n,
                               std::vector<BoundaryCondition> bcs = {}, SystemOptions options = {});

/// Momentum tendency in conservative physical form,
///   -div(m (x) u) - grad p + (curl H) x B + (div B) H + div sigma,
/// an independent code path for the diamond assembly.
CovectorDensity physical_momentum_rhs(const FluidState& state, const EquationOfState& eos, double mu0,
                                      const ViscosityCoefficients& viscosity);

}  // namespace dforms
