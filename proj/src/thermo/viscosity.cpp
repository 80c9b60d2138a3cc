#include "dforms/thermo/viscosity.hpp"

#include "dforms/grid/operators.hpp"

namespace dforms {

TensorField::TensorField(MeshPtr mesh) : mesh_(std::move(mesh)) {
  comps_.assign(static_cast<std::size_t>(mesh_->dim() * mesh_->dim()), Field::Zero(mesh_->node_count()));
}

TensorField& TensorField::operator+=(const TensorField& o) {
  require_same_mesh(*mesh_, *o.mesh_);
  for (std::size_t c = 0; c < comps_.size(); ++c) comps_[c] += o.comps_[c];
  return *this;
}

TensorField& TensorField::operator*=(double a) {
  for (auto& c : comps_) c *= a;
  return *this;
}

double TensorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator*(double s, TensorField a) { return a *= s; }

TensorField velocity_gradient(const VectorField& u) {
  TensorField g(u.mesh_ptr());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) g(i, j) = partial(u.mesh(), u[i], j);
  return g;
}

namespace {

Field trace(const TensorField& t) {
  Field tr = Field::Zero(t.mesh().node_count());
  for (int i = 0; i < t.dim(); ++i) tr += t(i, i);
  return tr;
}

}  // namespace

TensorField homothety_part(const TensorField& t) {
  TensorField h(t.mesh_ptr());
  const Field mean = trace(t) / t.dim();
  for (int i = 0; i < t.dim(); ++i) h(i, i) = mean;
  return h;
}

TensorField traceless_part(const TensorField& t) {
  TensorField s(t.mesh_ptr());
  const Field mean = trace(t) / t.dim();
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) s(i, j) = 0.5 * (t(i, j) + t(j, i));
  for (int i = 0; i < t.dim(); ++i) s(i, i) -= mean;
  return s;
}

TensorField skew_part(const TensorField& t) {
  TensorField a(t.mesh_ptr());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) a(i, j) = 0.5 * (t(i, j) - t(j, i));
  return a;
}

TensorField viscous_stress(const TensorField& grad, const ViscosityCoefficients& c, const Field* scale) {
  TensorField sigma(grad.mesh_ptr());
  if (c.homothety != 0.0) sigma += c.homothety * homothety_part(grad);
  if (c.traceless != 0.0) sigma += c.traceless * traceless_part(grad);
  if (c.skew != 0.0) sigma += c.skew * skew_part(grad);
  if (scale) {
    for (int i = 0; i < grad.dim(); ++i)
      for (int j = 0; j < grad.dim(); ++j) sigma(i, j) *= *scale;
  }
  return sigma;
}

CovectorDensity tensor_divergence(const TensorField& sigma) {
  CovectorDensity out(sigma.mesh_ptr());
  for (int i = 0; i < sigma.dim(); ++i)
    for (int j = 0; j < sigma.dim(); ++j) out[i] += partial(sigma.mesh(), sigma(i, j), j);
  return out;
}

Field contract(const TensorField& a, const TensorField& b) {
  Field out = Field::Zero(a.mesh().node_count());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out += a(i, j) * b(i, j);
  return out;
}

}  // namespace dforms
