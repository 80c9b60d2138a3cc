#pragma once

#include "dforms/curie/fiber.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dforms {

enum class AffinityKind {
  Discrete,    ///< linear combination of dual variables, drives a source term
  Continuous,  ///< exterior derivative of a dual variable, drives a divergence
  Viscous,     ///< velocity gradient channel
};

/// Time-reversal parity of a process: Even = A+, Odd = A-.
enum class Parity { Even, Odd };

std::string to_string(Parity p);
std::string to_string(AffinityKind k);

struct ProcessDescriptor {
  std::string name;
  AffinityKind kind = AffinityKind::Continuous;
  /// Degree l of the affinity; its flux has degree n - l.
  int degree = 1;
  curie::Action action = curie::Action::Right;
  Parity parity = Parity::Even;
  /// Coefficient of each advected quantity the process acts on; empty means a
  /// single quantity with coefficient 1.
  std::vector<double> lambdas;
  /// Viscous processes: which irreducible block of the velocity gradient.
  curie::TensorChannel channel = curie::TensorChannel::Homothety;

  curie::FiberRep fiber(int n) const;
};

/// Warning text when a discrete process does not conserve mass, i.e.
/// sum_i lambda_i M_i differs from zero by more than tol * sum_i |lambda_i M_i|.
std::optional<std::string> mass_balance_warning(const ProcessDescriptor& p, const std::vector<double>& molar_masses,
                                                double tol = 1e-12);

}  // namespace dforms
