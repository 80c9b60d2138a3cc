#pragma once

#include "dforms/grid/fields.hpp"
#include "dforms/thermo/closure.hpp"

#include <vector>

namespace dforms {

/// Mixed (1,1) tensor field, n x n nodal components; (i, j) is stored at i * n + j.
/// A velocity gradient holds (i, j) = D_j u^i; a stress holds sigma^j_i at (i, j),
/// so that (div sigma)_i = sum_j D_j sigma(i, j).
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(MeshPtr mesh);

  int dim() const { return mesh_->dim(); }
  const GridMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  Field& operator()(int i, int j) { return comps_[static_cast<std::size_t>(i * dim() + j)]; }
  const Field& operator()(int i, int j) const { return comps_[static_cast<std::size_t>(i * dim() + j)]; }

  TensorField& operator+=(const TensorField& o);
  TensorField& operator*=(double a);
  double max_abs() const;

 private:
  MeshPtr mesh_;
  std::vector<Field> comps_;
};

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator*(double s, TensorField a);

TensorField velocity_gradient(const VectorField& u);

/// (tr / n) I.
TensorField homothety_part(const TensorField& t);
/// sym(t) - (tr / n) I.
TensorField traceless_part(const TensorField& t);
/// (t - t^T) / 2.
TensorField skew_part(const TensorField& t);

/// sigma = k^h (tr / n) I + k^0 (sym - tr / n I) + k^a skew, optionally times a
/// nodal coefficient field.
TensorField viscous_stress(const TensorField& grad, const ViscosityCoefficients& c, const Field* scale = nullptr);

/// (div sigma)_i = sum_j D_j sigma(i, j).
CovectorDensity tensor_divergence(const TensorField& sigma);

/// Pointwise full contraction sum_ij a(i, j) b(i, j).
Field contract(const TensorField& a, const TensorField& b);

}  // namespace dforms
