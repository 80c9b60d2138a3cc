#include "dforms/thermo/process.hpp"

#include "dforms/core/error.hpp"

#include <cmath>

namespace dforms {

std::string to_string(Parity p) { return p == Parity::Even ? "A+" : "A-"; }

std::string to_string(AffinityKind k) {
  switch (k) {
    case AffinityKind::Discrete:
      return "discrete";
    case AffinityKind::Continuous:
      return "continuous";
    case AffinityKind::Viscous:
      return "viscous";
  }
  return "?";
}

curie::FiberRep ProcessDescriptor::fiber(int n) const {
  if (kind == AffinityKind::Viscous) return curie::FiberRep::tensor_channel(n, channel);
  return curie::FiberRep::form(n, degree, action);
}

std::optional<std::string> mass_balance_warning(const ProcessDescriptor& p, const std::vector<double>& molar_masses,
                                                double tol) {
  if (p.kind != AffinityKind::Discrete) return std::nullopt;
  if (p.lambdas.size() != molar_masses.size()) {
    throw ClosureError("process '" + p.name + "' has " + std::to_string(p.lambdas.size()) +
                       " coefficients for " + std::to_string(molar_masses.size()) + " quantities");
  }
  double sum = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < molar_masses.size(); ++i) {
    sum += p.lambdas[i] * molar_masses[i];
    scale += std::abs(p.lambdas[i] * molar_masses[i]);
  }
  if (std::abs(sum) <= tol * scale) return std::nullopt;
  return "process '" + p.name + "' does not conserve mass: sum lambda_i M_i = " + std::to_string(sum);
}

}  // namespace dforms
