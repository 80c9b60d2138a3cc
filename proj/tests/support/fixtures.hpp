#pragma once

#include "dforms/grid/fields.hpp"
#include "dforms/grid/multi_index.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dforms::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline MeshPtr periodic_box(int n, int cells) { return GridMesh::periodic_box(n, cells, kTwoPi); }

inline Field random_field(const GridMesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field f(mesh.node_count());
  for (Index i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

inline DiscreteForm random_form(const MeshPtr& mesh, int degree, std::mt19937_64& rng) {
  DiscreteForm a(mesh, degree);
  for (int c = 0; c < a.component_count(); ++c) a[c] = random_field(*mesh, rng);
  return a;
}

inline VectorField random_vector(const MeshPtr& mesh, std::mt19937_64& rng) {
  VectorField v(mesh);
  for (int i = 0; i < mesh->dim(); ++i) v[i] = random_field(*mesh, rng);
  return v;
}

/// Largest nodal difference between two forms of equal degree.
inline double max_diff(const DiscreteForm& a, const DiscreteForm& b) {
  double m = 0.0;
  for (int c = 0; c < a.component_count(); ++c) m = std::max(m, (a[c] - b[c]).abs().maxCoeff());
  return m;
}

inline double rms(const GridMesh& mesh, const Field& f) {
  return std::sqrt((mesh.quadrature_weights() * f.square()).sum() /
                   mesh.quadrature_weights().sum());
}

/// Observed order from errors at spacing h and h/2.
inline double slope(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace dforms::testing
