#pragma once

#include "dforms/grid/fields.hpp"

#include <vector>

namespace dforms {

// Exterior calculus on collocated nodal forms. Every operator is a pure
// function of its inputs. Differences are the centered stencils of `partial`,
// so d o d = 0 holds exactly (difference operators along distinct axes
// commute) and, on periodic axes, the nodal quadrature is an exact
// summation-by-parts partner of d.

/// d: degree k -> k + 1. Throws DegreeError when k = n.
DiscreteForm exterior_derivative(const DiscreteForm& a);

/// Pointwise a ^ b with shuffle signs. Throws DegreeError when k + l > n.
DiscreteForm wedge(const DiscreteForm& a, const DiscreteForm& b);

/// Euclidean Hodge star: degree k -> n - k, star(star(a)) = (-1)^{k(n-k)} a.
DiscreteForm hodge(const DiscreteForm& a);

/// i_u a: contraction into the first slot. Throws DegreeError when k = 0.
DiscreteForm interior_product(const VectorField& u, const DiscreteForm& a);

/// i_{e_axis} a for the constant unit field along `axis`.
DiscreteForm interior_axis(int axis, const DiscreteForm& a);

/// Lie derivative by Cartan's formula i_u d a + d i_u a.
DiscreteForm lie_derivative(const VectorField& u, const DiscreteForm& a);

/// Lie derivative of a covector density:
/// (L_u m)_i = sum_j D_j(u^j m_i) + m_j D_i u^j.
CovectorDensity lie_derivative(const VectorField& u, const CovectorDensity& m);

/// b <> a = i_(.) db ^ a - b ^ i_(.) da for deg b + deg a = n.
/// Satisfies <b <> a, v> = -<b, L_v a> when the boundary term vanishes.
CovectorDensity diamond(const DiscreteForm& b, const DiscreteForm& a);

/// Quadrature of an n-form: nodal sum weighted by cell volume (trapezoidal
/// halving on bounded-axis boundary layers).
double integrate(const DiscreteForm& a);

/// Quadrature of a nodal scalar density.
double integrate(const GridMesh& mesh, const Field& density);

/// <b, a> = integral of b ^ a for complementary degrees.
double pairing(const DiscreteForm& b, const DiscreteForm& a);

/// <m, u> = integral of m . u.
double pairing(const CovectorDensity& m, const VectorField& u);

DiscreteForm flat(const VectorField& u);
VectorField sharp(const DiscreteForm& a);

/// Zero-form with the given nodal values.
DiscreteForm scalar_form(MeshPtr mesh, Field values);
/// Volume form f dx^1 ^ ... ^ dx^n.
DiscreteForm volume_form(MeshPtr mesh, Field coefficient);
/// Coefficient f of an n-form f dx; Hodge dual of a top form.
const Field& volume_coefficient(const DiscreteForm& a);
/// (n-1)-form star(v^flat) carrying a flux vector (B -> beta layout).
DiscreteForm flux_form(const VectorField& v);
/// Vector (star beta)^sharp of an (n-1)-form.
VectorField flux_vector(const DiscreteForm& beta);

/// Restriction of a form to one face of a bounded axis.
struct FaceTrace {
  int axis = 0;
  int side = 0;  ///< 0 = low face, 1 = high face
  std::vector<unsigned> masks;  ///< tangential basis elements kept on the face
  std::vector<Field> values;    ///< one field per mask, over the face nodes
  std::vector<Index> nodes;     ///< flat node indices of the face
};

/// Pullback to the boundary: the purely tangential components on every face
/// of every bounded axis. A form is normal to the boundary iff all are zero.
struct BoundaryTrace {
  int degree = 0;
  std::vector<FaceTrace> faces;

  double max_abs() const;
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }
};

/// Throws BoundaryError on a fully periodic mesh.
BoundaryTrace boundary_trace(const DiscreteForm& a);

/// Flat node indices of one face of a bounded axis.
std::vector<Index> face_nodes(const GridMesh& mesh, int axis, int side);

}  // namespace dforms
