#include "dforms/grid/fields.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/multi_index.hpp"

#include <string>

namespace dforms {

Field sample(const GridMesh& mesh, const ScalarFunction& f) {
  Field out(mesh.node_count());
  for (Index idx = 0; idx < mesh.node_count(); ++idx) out[idx] = f(mesh.position(idx));
  return out;
}

void require_same_mesh(const GridMesh& a, const GridMesh& b) {
  if (&a != &b && a != b) throw MeshError("operands live on different meshes");
}

// --- DiscreteForm ----------------------------------------------------------

DiscreteForm::DiscreteForm(MeshPtr mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (degree < 0 || degree > mesh_->dim()) {
    throw DegreeError("form degree " + std::to_string(degree) + " outside [0, " +
                      std::to_string(mesh_->dim()) + "]");
  }
  components_.assign(multi_index::binomial(mesh_->dim(), degree),
                     Field::Zero(mesh_->node_count()));
}

DiscreteForm::DiscreteForm(MeshPtr mesh, int degree, std::vector<Field> components)
    : DiscreteForm(std::move(mesh), degree) {
  if (components.size() != components_.size()) {
    throw DegreeError("degree-" + std::to_string(degree) + " form needs " +
                      std::to_string(components_.size()) + " components, got " +
                      std::to_string(components.size()));
  }
  for (const auto& c : components) {
    if (c.size() != mesh_->node_count()) throw MeshError("component size does not match mesh");
  }
  components_ = std::move(components);
}

DiscreteForm DiscreteForm::from_functions(MeshPtr mesh, int degree,
                                          const std::vector<ScalarFunction>& components) {
  std::vector<Field> comps;
  comps.reserve(components.size());
  for (const auto& f : components) comps.push_back(sample(*mesh, f));
  return DiscreteForm(std::move(mesh), degree, std::move(comps));
}

Field& DiscreteForm::by_mask(unsigned mask) {
  return components_[multi_index::position(dim(), mask)];
}

const Field& DiscreteForm::by_mask(unsigned mask) const {
  return components_[multi_index::position(dim(), mask)];
}

void DiscreteForm::check_compatible(const DiscreteForm& other) const {
  require_same_mesh(*mesh_, *other.mesh_);
  if (degree_ != other.degree_) {
    throw DegreeError("cannot combine forms of degree " + std::to_string(degree_) + " and " +
                      std::to_string(other.degree_));
  }
}

DiscreteForm& DiscreteForm::operator+=(const DiscreteForm& other) {
  check_compatible(other);
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] += other.components_[c];
  return *this;
}

DiscreteForm& DiscreteForm::operator-=(const DiscreteForm& other) {
  check_compatible(other);
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] -= other.components_[c];
  return *this;
}

DiscreteForm& DiscreteForm::operator*=(double a) {
  for (auto& c : components_) c *= a;
  return *this;
}

DiscreteForm& DiscreteForm::scale_by(const Field& f) {
  for (auto& c : components_) c *= f;
  return *this;
}

DiscreteForm& DiscreteForm::add_scaled(const DiscreteForm& other, double a) {
  check_compatible(other);
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] += a * other.components_[c];
  return *this;
}

double DiscreteForm::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

bool DiscreteForm::all_finite() const {
  for (const auto& c : components_)
    if (!c.isFinite().all()) return false;
  return true;
}

DiscreteForm operator+(DiscreteForm a, const DiscreteForm& b) { return a += b; }
DiscreteForm operator-(DiscreteForm a, const DiscreteForm& b) { return a -= b; }
DiscreteForm operator*(double s, DiscreteForm a) { return a *= s; }
DiscreteForm operator-(DiscreteForm a) { return a *= -1.0; }

// --- VectorField -----------------------------------------------------------

VectorField::VectorField(MeshPtr mesh, BoundaryFlag flag)
    : mesh_(std::move(mesh)), flag_(flag) {
  components_.assign(mesh_->dim(), Field::Zero(mesh_->node_count()));
}

VectorField::VectorField(MeshPtr mesh, std::vector<Field> components, BoundaryFlag flag)
    : mesh_(std::move(mesh)), components_(std::move(components)), flag_(flag) {
  if (static_cast<int>(components_.size()) != mesh_->dim()) {
    throw DegreeError("vector field needs one component per axis");
  }
}

VectorField VectorField::from_functions(MeshPtr mesh, const std::vector<ScalarFunction>& components,
                                        BoundaryFlag flag) {
  std::vector<Field> comps;
  for (const auto& f : components) comps.push_back(sample(*mesh, f));
  return VectorField(std::move(mesh), std::move(comps), flag);
}

VectorField VectorField::unit(MeshPtr mesh, int axis) {
  VectorField v(std::move(mesh));
  v[axis].setOnes();
  return v;
}

bool VectorField::satisfies_boundary_flag(double tol) const {
  if (flag_ == BoundaryFlag::Free) return true;
  const auto& m = *mesh_;
  for (Index idx = 0; idx < m.node_count(); ++idx) {
    const auto ijk = m.unflatten(idx);
    for (int a = 0; a < m.dim(); ++a) {
      if (m.periodic(a) || (ijk[a] != 0 && ijk[a] != m.nodes(a) - 1)) continue;
      if (flag_ == BoundaryFlag::Tangent) {
        if (std::abs(components_[a][idx]) > tol) return false;
      } else {
        for (int c = 0; c < m.dim(); ++c)
          if (std::abs(components_[c][idx]) > tol) return false;
      }
    }
  }
  return true;
}

void VectorField::enforce_boundary_flag() {
  if (flag_ == BoundaryFlag::Free) return;
  const auto& m = *mesh_;
  for (Index idx = 0; idx < m.node_count(); ++idx) {
    const auto ijk = m.unflatten(idx);
    for (int a = 0; a < m.dim(); ++a) {
      if (m.periodic(a) || (ijk[a] != 0 && ijk[a] != m.nodes(a) - 1)) continue;
      if (flag_ == BoundaryFlag::Tangent) {
        components_[a][idx] = 0.0;
      } else {
        for (int c = 0; c < m.dim(); ++c) components_[c][idx] = 0.0;
      }
    }
  }
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

// --- CovectorDensity -------------------------------------------------------

CovectorDensity::CovectorDensity(MeshPtr mesh) : mesh_(std::move(mesh)) {
  components_.assign(mesh_->dim(), Field::Zero(mesh_->node_count()));
}

CovectorDensity::CovectorDensity(MeshPtr mesh, std::vector<Field> components)
    : mesh_(std::move(mesh)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != mesh_->dim()) {
    throw DegreeError("covector density needs one component per axis");
  }
}

CovectorDensity& CovectorDensity::operator+=(const CovectorDensity& other) {
  require_same_mesh(*mesh_, *other.mesh_);
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] += other.components_[c];
  return *this;
}

CovectorDensity& CovectorDensity::operator-=(const CovectorDensity& other) {
  require_same_mesh(*mesh_, *other.mesh_);
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] -= other.components_[c];
  return *this;
}

CovectorDensity& CovectorDensity::operator*=(double a) {
  for (auto& c : components_) c *= a;
  return *this;
}

CovectorDensity& CovectorDensity::add_scaled(const CovectorDensity& other, double a) {
  require_same_mesh(*mesh_, *other.mesh_);
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] += a * other.components_[c];
  return *this;
}

double CovectorDensity::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

bool CovectorDensity::all_finite() const {
  for (const auto& c : components_)
    if (!c.isFinite().all()) return false;
  return true;
}

CovectorDensity operator+(CovectorDensity a, const CovectorDensity& b) { return a += b; }
CovectorDensity operator-(CovectorDensity a, const CovectorDensity& b) { return a -= b; }
CovectorDensity operator*(double s, CovectorDensity a) { return a *= s; }

}  // namespace dforms
