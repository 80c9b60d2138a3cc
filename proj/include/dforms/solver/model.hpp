#pragma once

#include "dforms/solver/eos.hpp"
#include "dforms/solver/state.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dforms {

/// Variational derivatives of a model at one state.
struct ModelDuals {
  VectorField u;                 ///< velocity, the derivative of the energy in m
  std::vector<DiscreteForm> b;   ///< b_q = dl/da_q, degree n - k_q
  DiscreteForm T;                ///< temperature (0-form), minus the dual of the entropy
  Field rho;                     ///< mass density passed to coefficient hooks
};

/// Thermodynamic content of an advected system: its quantities, energy and
/// dual variables. The energy is a pointwise function of (m, a_1, ..., a_N).
class Model {
 public:
  virtual ~Model() = default;
  virtual std::string name() const = 0;
  virtual std::vector<Quantity> quantities(int n) const = 0;
  /// Position of the entropy density among the quantities.
  virtual int entropy_index() const = 0;
  virtual ModelDuals duals(const SystemState& state) const = 0;
  /// Coefficient of the energy density n-form.
  virtual Field energy_density(const SystemState& state) const = 0;
};

/// Two-species MHD: l = int 1/2 rho |u|^2 - e(n1, n2, s) - |B|^2 / (2 mu0).
class MhdModel : public Model {
 public:
  MhdModel(EquationOfState eos, double mu0);

  std::string name() const override { return "mhd"; }
  std::vector<Quantity> quantities(int n) const override { return mhd_quantities(n); }
  int entropy_index() const override { return 3; }
  ModelDuals duals(const SystemState& state) const override;
  Field energy_density(const SystemState& state) const override;

  const EquationOfState& eos() const { return eos_; }
  double mu0() const { return mu0_; }

 private:
  EquationOfState eos_;
  double mu0_;
};

/// N species at rest with an entropy density:
///   e = theta sum_i n_i ln n_i + cv T0 exp(s / cv),  T = T0 exp(s / cv).
/// With N = 0 this is the scalar heat problem.
class MixtureModel : public Model {
 public:
  MixtureModel(int species, double theta, double cv, double T0);

  std::string name() const override { return "mixture"; }
  std::vector<Quantity> quantities(int n) const override;
  int entropy_index() const override { return species_; }
  ModelDuals duals(const SystemState& state) const override;
  Field energy_density(const SystemState& state) const override;

  int species() const { return species_; }

 private:
  int species_;
  double theta_;
  double cv_;
  double T0_;
};

/// Dual variables of the MHD model in physical notation.
struct DualFields {
  DiscreteForm T;
  DiscreteForm mu_tilde1;  ///< mu1 - 1/2 |u|^2 M1
  DiscreteForm mu_tilde2;
  DiscreteForm mu;         ///< mu_tilde1 / M1 - mu_tilde2 / M2
  DiscreteForm H_form;     ///< H = B / mu0 as a 1-form
  CovectorDensity m;
  DiscreteForm p;
};

DualFields dual_fields(const FluidState& state, const EquationOfState& eos, double mu0);

/// B recovered from beta (an (n-1)-form).
VectorField magnetic_field(const DiscreteForm& beta);

}  // namespace dforms
