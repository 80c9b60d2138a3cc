#include "dforms/grid/operators.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/multi_index.hpp"

#include <string>

namespace dforms {

namespace mi = multi_index;

DiscreteForm exterior_derivative(const DiscreteForm& a) {
  const int n = a.dim();
  const int k = a.degree();
  if (k >= n) throw DegreeError("exterior derivative of a top-degree form (k = n)");
  const auto& mesh = a.mesh();
  const auto& src = mi::basis(n, k);

  // D_i of every source component is needed at most once per (i, component).
  DiscreteForm out(a.mesh_ptr(), k + 1);
  for (std::size_t p = 0; p < src.size(); ++p) {
    for (int i = 0; i < n; ++i) {
      const int s = mi::insert_sign(i, src[p]);
      if (s == 0) continue;
      const Field di = partial(mesh, a[static_cast<int>(p)], i);
      Field& target = out.by_mask(src[p] | (1u << i));
      if (s > 0) {
        target += di;
      } else {
        target -= di;
      }
    }
  }
  return out;
}

DiscreteForm wedge(const DiscreteForm& a, const DiscreteForm& b) {
  require_same_mesh(a.mesh(), b.mesh());
  const int n = a.dim();
  const int k = a.degree();
  const int l = b.degree();
  if (k + l > n) {
    throw DegreeError("wedge of degrees " + std::to_string(k) + " and " + std::to_string(l) +
                      " exceeds dimension " + std::to_string(n));
  }
  const auto& ba = mi::basis(n, k);
  const auto& bb = mi::basis(n, l);
  DiscreteForm out(a.mesh_ptr(), k + l);
  for (std::size_t p = 0; p < ba.size(); ++p) {
    for (std::size_t q = 0; q < bb.size(); ++q) {
      const int s = mi::shuffle_sign(ba[p], bb[q]);
      if (s == 0) continue;
      Field& target = out.by_mask(ba[p] | bb[q]);
      if (s > 0) {
        target += a[static_cast<int>(p)] * b[static_cast<int>(q)];
      } else {
        target -= a[static_cast<int>(p)] * b[static_cast<int>(q)];
      }
    }
  }
  return out;
}

DiscreteForm hodge(const DiscreteForm& a) {
  const int n = a.dim();
  const int k = a.degree();
  const auto& bk = mi::basis(n, k);
  DiscreteForm out(a.mesh_ptr(), n - k);
  for (std::size_t p = 0; p < bk.size(); ++p) {
    const unsigned c = mi::full_mask(n) & ~bk[p];
    out.by_mask(c) = mi::hodge_sign(n, bk[p]) * a[static_cast<int>(p)];
  }
  return out;
}

namespace {

template <class Coefficient>
DiscreteForm contract(const DiscreteForm& a, Coefficient&& coefficient) {
  const int n = a.dim();
  const int k = a.degree();
  if (k == 0) throw DegreeError("interior product of a 0-form");
  const auto& dst = mi::basis(n, k - 1);
  DiscreteForm out(a.mesh_ptr(), k - 1);
  for (std::size_t p = 0; p < dst.size(); ++p) {
    for (int i = 0; i < n; ++i) {
      const int s = mi::insert_sign(i, dst[p]);
      if (s == 0) continue;
      coefficient(out[static_cast<int>(p)], i, s, a.by_mask(dst[p] | (1u << i)));
    }
  }
  return out;
}

}  // namespace

DiscreteForm interior_product(const VectorField& u, const DiscreteForm& a) {
  require_same_mesh(u.mesh(), a.mesh());
  return contract(a, [&](Field& target, int i, int s, const Field& comp) {
    if (s > 0) {
      target += u[i] * comp;
    } else {
      target -= u[i] * comp;
    }
  });
}

DiscreteForm interior_axis(int axis, const DiscreteForm& a) {
  return contract(a, [&](Field& target, int i, int s, const Field& comp) {
    if (i != axis) return;
    if (s > 0) {
      target += comp;
    } else {
      target -= comp;
    }
  });
}

DiscreteForm lie_derivative(const VectorField& u, const DiscreteForm& a) {
  require_same_mesh(u.mesh(), a.mesh());
  const int n = a.dim();
  const int k = a.degree();
  DiscreteForm out(a.mesh_ptr(), k);
  if (k < n) out += interior_product(u, exterior_derivative(a));
  if (k > 0) out += exterior_derivative(interior_product(u, a));
  return out;
}

CovectorDensity lie_derivative(const VectorField& u, const CovectorDensity& m) {
  require_same_mesh(u.mesh(), m.mesh());
  const auto& mesh = m.mesh();
  const int n = m.dim();
  CovectorDensity out(m.mesh_ptr());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[i] += partial(mesh, u[j] * m[i], j);
      out[i] += m[j] * partial(mesh, u[j], i);
    }
  }
  return out;
}

CovectorDensity diamond(const DiscreteForm& b, const DiscreteForm& a) {
  require_same_mesh(a.mesh(), b.mesh());
  const int n = a.dim();
  const int k = a.degree();
  if (b.degree() + k != n) {
    throw DegreeError("diamond needs complementary degrees, got " + std::to_string(b.degree()) +
                      " and " + std::to_string(k));
  }
  CovectorDensity out(a.mesh_ptr());
  const bool has_db = b.degree() < n;
  const bool has_da = k < n;
  const DiscreteForm db = has_db ? exterior_derivative(b) : DiscreteForm();
  const DiscreteForm da = has_da ? exterior_derivative(a) : DiscreteForm();
  for (int i = 0; i < n; ++i) {
    if (has_db) out[i] += wedge(interior_axis(i, db), a)[0];
    if (has_da) out[i] -= wedge(b, interior_axis(i, da))[0];
  }
  return out;
}

double integrate(const GridMesh& mesh, const Field& density) {
  return (mesh.quadrature_weights() * density).sum();
}

double integrate(const DiscreteForm& a) {
  if (a.degree() != a.dim()) {
    throw DegreeError("only top-degree forms integrate over the domain, got degree " +
                      std::to_string(a.degree()));
  }
  return integrate(a.mesh(), a[0]);
}

double pairing(const DiscreteForm& b, const DiscreteForm& a) { return integrate(wedge(b, a)); }

double pairing(const CovectorDensity& m, const VectorField& u) {
  require_same_mesh(m.mesh(), u.mesh());
  Field acc = Field::Zero(m.mesh().node_count());
  for (int i = 0; i < m.dim(); ++i) acc += m[i] * u[i];
  return integrate(m.mesh(), acc);
}

DiscreteForm flat(const VectorField& u) {
  std::vector<Field> comps;
  for (int i = 0; i < u.dim(); ++i) comps.push_back(u[i]);
  return DiscreteForm(u.mesh_ptr(), 1, std::move(comps));
}

VectorField sharp(const DiscreteForm& a) {
  if (a.degree() != 1) throw DegreeError("sharp expects a 1-form");
  return VectorField(a.mesh_ptr(), a.components());
}

DiscreteForm scalar_form(MeshPtr mesh, Field values) {
  return DiscreteForm(std::move(mesh), 0, {std::move(values)});
}

DiscreteForm volume_form(MeshPtr mesh, Field coefficient) {
  const int n = mesh->dim();
  return DiscreteForm(std::move(mesh), n, {std::move(coefficient)});
}

const Field& volume_coefficient(const DiscreteForm& a) {
  if (a.degree() != a.dim()) throw DegreeError("expected a top-degree form");
  return a[0];
}

DiscreteForm flux_form(const VectorField& v) { return hodge(flat(v)); }

VectorField flux_vector(const DiscreteForm& beta) {
  if (beta.degree() != beta.dim() - 1) throw DegreeError("expected an (n-1)-form");
  // star(star(w)) = (-1)^{(n-1)} w on 1-forms; invert with the matching sign.
  DiscreteForm w = hodge(beta);
  if ((beta.dim() - 1) % 2 != 0) w *= -1.0;
  return sharp(w);
}

std::vector<Index> face_nodes(const GridMesh& mesh, int axis, int side) {
  std::vector<Index> out;
  const int target = side == 0 ? 0 : mesh.nodes(axis) - 1;
  for (Index idx = 0; idx < mesh.node_count(); ++idx) {
    if (mesh.unflatten(idx)[axis] == target) out.push_back(idx);
  }
  return out;
}

double BoundaryTrace::max_abs() const {
  double m = 0.0;
  for (const auto& f : faces)
    for (const auto& v : f.values)
      if (v.size() > 0) m = std::max(m, v.abs().maxCoeff());
  return m;
}

BoundaryTrace boundary_trace(const DiscreteForm& a) {
  const auto& mesh = a.mesh();
  if (mesh.fully_periodic()) throw BoundaryError("boundary trace on a mesh without boundary");
  const int n = a.dim();
  BoundaryTrace trace;
  trace.degree = a.degree();
  for (int axis = 0; axis < n; ++axis) {
    if (mesh.periodic(axis)) continue;
    for (int side = 0; side < 2; ++side) {
      FaceTrace face;
      face.axis = axis;
      face.side = side;
      face.nodes = face_nodes(mesh, axis, side);
      for (unsigned mask : mi::basis(n, a.degree())) {
        if (mask & (1u << axis)) continue;
        const Field& comp = a.by_mask(mask);
        Field values(static_cast<Index>(face.nodes.size()));
        for (std::size_t p = 0; p < face.nodes.size(); ++p) values[p] = comp[face.nodes[p]];
        face.masks.push_back(mask);
        face.values.push_back(std::move(values));
      }
      trace.faces.push_back(std::move(face));
    }
  }
  return trace;
}

}  // namespace dforms
