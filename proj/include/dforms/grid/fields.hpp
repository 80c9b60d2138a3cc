#pragma once

#include "dforms/grid/mesh.hpp"

#include <functional>
#include <vector>

namespace dforms {

/// Analytic profile evaluated at node positions.
using ScalarFunction = std::function<double(const std::array<double, 3>&)>;

Field sample(const GridMesh& mesh, const ScalarFunction& f);

/// Degree-k form stored as its C(n,k) component fields on the mesh nodes, in
/// the storage order of multi_index::basis(n, k).
class DiscreteForm {
 public:
  DiscreteForm() = default;
  DiscreteForm(MeshPtr mesh, int degree);
  DiscreteForm(MeshPtr mesh, int degree, std::vector<Field> components);

  /// Samples one analytic function per component.
  static DiscreteForm from_functions(MeshPtr mesh, int degree,
                                     const std::vector<ScalarFunction>& components);

  int degree() const { return degree_; }
  int dim() const { return mesh_->dim(); }
  const GridMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }

  int component_count() const { return static_cast<int>(components_.size()); }
  Field& operator[](int c) { return components_[c]; }
  const Field& operator[](int c) const { return components_[c]; }
  /// Component of the basis element with the given index bitmask.
  Field& by_mask(unsigned mask);
  const Field& by_mask(unsigned mask) const;
  const std::vector<Field>& components() const { return components_; }

  DiscreteForm& operator+=(const DiscreteForm& other);
  DiscreteForm& operator-=(const DiscreteForm& other);
  DiscreteForm& operator*=(double a);
  /// Pointwise multiplication by a 0-form coefficient field.
  DiscreteForm& scale_by(const Field& f);
  DiscreteForm& add_scaled(const DiscreteForm& other, double a);

  double max_abs() const;
  bool all_finite() const;

 private:
  void check_compatible(const DiscreteForm& other) const;

  MeshPtr mesh_;
  int degree_ = 0;
  std::vector<Field> components_;
};

DiscreteForm operator+(DiscreteForm a, const DiscreteForm& b);
DiscreteForm operator-(DiscreteForm a, const DiscreteForm& b);
DiscreteForm operator*(double s, DiscreteForm a);
DiscreteForm operator-(DiscreteForm a);

/// Which velocity space a vector field is meant to live in on bounded axes.
enum class BoundaryFlag {
  Free,     ///< no condition
  Tangent,  ///< normal component vanishes on boundary nodes
  Fixed,    ///< all components vanish on boundary nodes
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(MeshPtr mesh, BoundaryFlag flag = BoundaryFlag::Free);
  VectorField(MeshPtr mesh, std::vector<Field> components, BoundaryFlag flag = BoundaryFlag::Free);
  static VectorField from_functions(MeshPtr mesh, const std::vector<ScalarFunction>& components,
                                    BoundaryFlag flag = BoundaryFlag::Free);
  /// Constant field with a single unit component.
  static VectorField unit(MeshPtr mesh, int axis);

  int dim() const { return mesh_->dim(); }
  const GridMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  Field& operator[](int i) { return components_[i]; }
  const Field& operator[](int i) const { return components_[i]; }
  BoundaryFlag flag() const { return flag_; }
  void set_flag(BoundaryFlag f) { flag_ = f; }

  /// True when the field satisfies its boundary flag on every boundary node.
  bool satisfies_boundary_flag(double tol = 0.0) const;
  /// Zeros the components the flag constrains.
  void enforce_boundary_flag();

  double max_abs() const;

 private:
  MeshPtr mesh_;
  std::vector<Field> components_;
  BoundaryFlag flag_ = BoundaryFlag::Free;
};

/// Covector-valued density m = m_i dx^i (x) d^n x; pairs with vector fields.
class CovectorDensity {
 public:
  CovectorDensity() = default;
  explicit CovectorDensity(MeshPtr mesh);
  CovectorDensity(MeshPtr mesh, std::vector<Field> components);

  int dim() const { return mesh_->dim(); }
  const GridMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  Field& operator[](int i) { return components_[i]; }
  const Field& operator[](int i) const { return components_[i]; }
  int component_count() const { return static_cast<int>(components_.size()); }

  CovectorDensity& operator+=(const CovectorDensity& other);
  CovectorDensity& operator-=(const CovectorDensity& other);
  CovectorDensity& operator*=(double a);
  CovectorDensity& add_scaled(const CovectorDensity& other, double a);
  double max_abs() const;
  bool all_finite() const;

 private:
  MeshPtr mesh_;
  std::vector<Field> components_;
};

CovectorDensity operator+(CovectorDensity a, const CovectorDensity& b);
CovectorDensity operator-(CovectorDensity a, const CovectorDensity& b);
CovectorDensity operator*(double s, CovectorDensity a);

void require_same_mesh(const GridMesh& a, const GridMesh& b);

}  // namespace dforms
