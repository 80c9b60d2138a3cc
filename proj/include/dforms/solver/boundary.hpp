#pragma once

#include "dforms/grid/fields.hpp"

#include <string>
#include <vector>

namespace dforms {

enum class BoundaryKind {
  Homogeneous,  ///< tangential trace of the flux vanishes
  Dirichlet,    ///< tangential trace of the dual variable is prescribed
  Neumann,      ///< tangential trace of the flux is prescribed
};

std::string to_string(BoundaryKind k);
BoundaryKind parse_boundary_kind(const std::string& s);

/// Boundary condition of one continuous process. `value` holds one constant
/// per component of the traced form (dual for Dirichlet, flux for Neumann),
/// in multi-index storage order; empty means all zeros. On every face only
/// the components tangential to that face are imposed.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Homogeneous;
  std::vector<double> value;
};

/// Overwrites the tangential boundary trace of `f` with the given constants.
/// Throws BoundaryError if `values` does not match the component count.
void set_tangential_trace(DiscreteForm& f, const std::vector<double>& values);

/// Largest deviation of the tangential trace of `f` from the constants.
double tangential_trace_error(const DiscreteForm& f, const std::vector<double>& values);

struct BoundaryReport {
  std::vector<std::string> process;
  std::vector<std::string> kind;
  /// max |trace - target| after the correction, per process.
  std::vector<double> residual;
};

}  // namespace dforms
