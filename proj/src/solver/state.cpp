#include "dforms/solver/state.hpp"

#include "dforms/core/error.hpp"

namespace dforms {

SystemState SystemState::zeros_like() const {
  SystemState z;
  z.m = CovectorDensity(m.mesh_ptr());
  for (const auto& f : forms) z.forms.emplace_back(f.mesh_ptr(), f.degree());
  z.produced = DiscreteForm(produced.mesh_ptr(), produced.degree());
  return z;
}

SystemState& SystemState::add_scaled(const SystemState& other, double a) {
  if (forms.size() != other.forms.size()) throw Error("system states differ in layout");
  m.add_scaled(other.m, a);
  for (std::size_t i = 0; i < forms.size(); ++i) forms[i].add_scaled(other.forms[i], a);
  produced.add_scaled(other.produced, a);
  return *this;
}

bool SystemState::all_finite() const {
  if (!m.all_finite() || !produced.all_finite()) return false;
  for (const auto& f : forms)
    if (!f.all_finite()) return false;
  return true;
}

VectorField FluidState::velocity(double M1, double M2) const {
  const Field r = rho(M1, M2);
  VectorField u(m.mesh_ptr());
  for (int i = 0; i < m.dim(); ++i) u[i] = m[i] / r;
  return u;
}

SystemState FluidState::to_system() const { return SystemState{m, {nu1, nu2, beta, s}, sigma_prod}; }

FluidState FluidState::from_system(const SystemState& st) {
  if (st.forms.size() != 4) throw Error("system state does not have the MHD layout");
  return FluidState{st.m, st.forms[0], st.forms[1], st.forms[2], st.forms[3], st.produced};
}

std::vector<Quantity> mhd_quantities(int n) {
  return {{"nu1", n}, {"nu2", n}, {"beta", n - 1}, {"s", n}};
}

}  // namespace dforms
