#include "dforms/solver/eos.hpp"

#include "dforms/core/error.hpp"
#include "dforms/thermo/closure.hpp"

#include <cmath>
#include <string>

namespace dforms {

EquationOfState::EquationOfState(EosParameters params) : p_(params) {
  if (!(p_.c0 > 0.0) || !(p_.cv > 0.0)) throw ConfigError("eos: c0 and cv must be positive");
  if (!(p_.M1 > 0.0) || !(p_.M2 > 0.0)) throw ConfigError("eos: molar masses must be positive");
  if (p_.mixing < 0.0) throw ConfigError("eos: mixing must be nonnegative");
  const double ratio = p_.M1 / p_.M2;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-12 * ratio) {
    throw ConfigError("eos: M1 / M2 = " + std::to_string(ratio) + " is not a positive integer");
  }
  k_ = static_cast<int>(k);
}

double EquationOfState::energy(double n1, double n2, double s) const {
  const double rho = p_.M1 * n1 + p_.M2 * n2;
  double e = p_.c0 * std::pow(rho, 5.0 / 3.0) * std::exp(s / (p_.cv * rho)) + p_.b1 * n1 + p_.b2 * n2;
  if (p_.mixing != 0.0) e += p_.mixing * (n1 * std::log(n1) + n2 * std::log(n2));
  return e;
}

std::array<double, 3> EquationOfState::partials(double n1, double n2, double s) const {
  const double rho = p_.M1 * n1 + p_.M2 * n2;
  const double g = p_.c0 * std::pow(rho, 5.0 / 3.0) * std::exp(s / (p_.cv * rho));
  const double dg_drho = g * (5.0 / (3.0 * rho) - s / (p_.cv * rho * rho));
  double mu1 = p_.M1 * dg_drho + p_.b1;
  double mu2 = p_.M2 * dg_drho + p_.b2;
  if (p_.mixing != 0.0) {
    mu1 += p_.mixing * (std::log(n1) + 1.0);
    mu2 += p_.mixing * (std::log(n2) + 1.0);
  }
  return {mu1, mu2, g / (p_.cv * rho)};
}

EosEvaluation EquationOfState::evaluate(const Field& n1, const Field& n2, const Field& s) const {
  require_positive(n1, "species 1 density");
  require_positive(n2, "species 2 density");
  EosEvaluation out;
  out.rho = p_.M1 * n1 + p_.M2 * n2;
  const Field g = p_.c0 * out.rho.pow(5.0 / 3.0) * (s / (p_.cv * out.rho)).exp();
  const Field dg_drho = g * (5.0 / (3.0 * out.rho) - s / (p_.cv * out.rho.square()));
  out.e = g + p_.b1 * n1 + p_.b2 * n2;
  out.mu1 = p_.M1 * dg_drho + p_.b1;
  out.mu2 = p_.M2 * dg_drho + p_.b2;
  if (p_.mixing != 0.0) {
    const Field l1 = n1.log(), l2 = n2.log();
    out.e += p_.mixing * (n1 * l1 + n2 * l2);
    out.mu1 += p_.mixing * (l1 + 1.0);
    out.mu2 += p_.mixing * (l2 + 1.0);
  }
  out.T = g / (p_.cv * out.rho);
  require_positive(out.T, "temperature");
  out.p = out.mu1 * n1 + out.mu2 * n2 + out.T * s - out.e;
  return out;
}

}  // namespace dforms
