#pragma once

#include "dforms/grid/mesh.hpp"

namespace dforms {

struct EosParameters {
  double c0 = 1.0;
  double cv = 1.0;
  double b1 = 0.2;
  double b2 = 0.1;
  double M1 = 2.0;
  double M2 = 1.0;
  /// Ideal-mixing coefficient theta of theta (n1 ln n1 + n2 ln n2); 0 disables it.
  double mixing = 0.0;
};

/// Nodal thermodynamic quantities of the equation of state.
struct EosEvaluation {
  Field rho;  ///< M1 n1 + M2 n2
  Field e;    ///< internal energy density
  Field mu1;  ///< de/dn1
  Field mu2;  ///< de/dn2
  Field T;    ///< de/ds
  Field p;    ///< mu1 n1 + mu2 n2 + T s - e
};

/// e(n1, n2, s) = c0 rho^(5/3) exp(s / (cv rho)) + b1 n1 + b2 n2
///              + theta (n1 ln n1 + n2 ln n2),  rho = M1 n1 + M2 n2.
class EquationOfState {
 public:
  explicit EquationOfState(EosParameters params = {});

  const EosParameters& params() const { return p_; }
  /// Stoichiometric factor k of the reaction 1 <-> k x 2 (M1 = k M2).
  int stoichiometry() const { return k_; }

  double energy(double n1, double n2, double s) const;
  /// Analytic partials (de/dn1, de/dn2, de/ds).
  std::array<double, 3> partials(double n1, double n2, double s) const;

  /// Throws ThermodynamicDomainError on nonpositive densities or temperature.
  EosEvaluation evaluate(const Field& n1, const Field& n2, const Field& s) const;

 private:
  EosParameters p_;
  int k_ = 1;
};

}  // namespace dforms
