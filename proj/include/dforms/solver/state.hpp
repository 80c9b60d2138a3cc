#pragma once

#include "dforms/grid/fields.hpp"

#include <string>
#include <vector>

namespace dforms {

/// An advected quantity of a general system: a named k-form.
struct Quantity {
  std::string name;
  int degree = 0;
};

/// State of a general advected system: momentum density, the advected forms,
/// and the cumulative produced-entropy density. Also used for tangents.
struct SystemState {
  CovectorDensity m;
  std::vector<DiscreteForm> forms;
  DiscreteForm produced;

  const MeshPtr& mesh_ptr() const { return produced.mesh_ptr(); }
  const GridMesh& mesh() const { return produced.mesh(); }

  /// Zero state with the same layout.
  SystemState zeros_like() const;
  SystemState& add_scaled(const SystemState& other, double a);
  bool all_finite() const;
};

/// Two-species MHD state (m, nu1, nu2, beta, s, sigma_prod). Momentum m = rho u
/// is stored instead of u; velocity() recovers u given rho.
struct FluidState {
  CovectorDensity m;
  DiscreteForm nu1;
  DiscreteForm nu2;
  DiscreteForm beta;
  DiscreteForm s;
  DiscreteForm sigma_prod;

  const GridMesh& mesh() const { return s.mesh(); }
  const MeshPtr& mesh_ptr() const { return s.mesh_ptr(); }

  Field rho(double M1, double M2) const { return M1 * nu1[0] + M2 * nu2[0]; }
  VectorField velocity(double M1, double M2) const;

  SystemState to_system() const;
  static FluidState from_system(const SystemState& st);
};

/// Quantity layout of the MHD system: nu1, nu2 (n-forms), beta ((n-1)-form), s (n-form).
std::vector<Quantity> mhd_quantities(int n);

}  // namespace dforms
