#include "dforms/solver/boundary.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/multi_index.hpp"
#include "dforms/grid/operators.hpp"

#include <cmath>

namespace dforms {

namespace mi = multi_index;

std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Homogeneous: return "homogeneous";
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::Neumann: return "neumann";
  }
  return "?";
}

BoundaryKind parse_boundary_kind(const std::string& s) {
  if (s == "homogeneous") return BoundaryKind::Homogeneous;
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "neumann") return BoundaryKind::Neumann;
  throw BoundaryError("unknown boundary kind '" + s + "'");
}

namespace {

template <class Visit>
void for_each_tangential(const DiscreteForm& f, const std::vector<double>& values, Visit&& visit) {
  const auto& mesh = f.mesh();
  const auto& basis = mi::basis(f.dim(), f.degree());
  if (!values.empty() && values.size() != basis.size()) {
    throw BoundaryError("trace data has " + std::to_string(values.size()) + " components, the degree-" +
                        std::to_string(f.degree()) + " form has " + std::to_string(basis.size()));
  }
  for (int axis = 0; axis < f.dim(); ++axis) {
    if (mesh.periodic(axis)) continue;
    for (int side = 0; side < 2; ++side) {
      const auto nodes = face_nodes(mesh, axis, side);
      for (std::size_t c = 0; c < basis.size(); ++c) {
        if (basis[c] & (1u << axis)) continue;
        const double target = values.empty() ? 0.0 : values[c];
        for (Index idx : nodes) visit(static_cast<int>(c), idx, target);
      }
    }
  }
}

}  // namespace

void set_tangential_trace(DiscreteForm& f, const std::vector<double>& values) {
  for_each_tangential(f, values, [&](int c, Index idx, double target) { f[c][idx] = target; });
}

double tangential_trace_error(const DiscreteForm& f, const std::vector<double>& values) {
  double err = 0.0;
  for_each_tangential(f, values,
                      [&](int c, Index idx, double target) { err = std::max(err, std::abs(f[c][idx] - target)); });
  return err;
}

}  // namespace dforms
