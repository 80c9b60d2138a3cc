#include "dforms/grid/mesh.hpp"

#include "dforms/core/error.hpp"

#include <string>

namespace dforms {

GridMesh::GridMesh(std::vector<int> cells, std::vector<double> spacing, std::vector<bool> periodic)
    : n_(static_cast<int>(cells.size())),
      cells_(std::move(cells)),
      spacing_(std::move(spacing)),
      periodic_(std::move(periodic)) {
  if (n_ != 2 && n_ != 3) {
    throw MeshError("mesh dimension must be 2 or 3, got " + std::to_string(n_));
  }
  if (static_cast<int>(spacing_.size()) != n_ || static_cast<int>(periodic_.size()) != n_) {
    throw MeshError("mesh dims, spacing and periodic flags must have equal length");
  }
  for (int a = 0; a < n_; ++a) {
    if (cells_[a] < kMinCells) {
      throw MeshError("axis " + std::to_string(a) + " has " + std::to_string(cells_[a]) +
                      " cells; at least " + std::to_string(kMinCells) + " required");
    }
    if (!(spacing_[a] > 0.0)) {
      throw MeshError("axis " + std::to_string(a) + " spacing must be positive");
    }
  }
  nodes_.resize(n_);
  strides_.resize(n_);
  for (int a = 0; a < n_; ++a) nodes_[a] = periodic_[a] ? cells_[a] : cells_[a] + 1;
  Index s = 1;
  for (int a = n_ - 1; a >= 0; --a) {
    strides_[a] = s;
    s *= nodes_[a];
  }
  count_ = s;

  weights_ = Field::Constant(count_, cell_volume());
  for (Index idx = 0; idx < count_; ++idx) {
    const auto ijk = unflatten(idx);
    for (int a = 0; a < n_; ++a) {
      if (!periodic_[a] && (ijk[a] == 0 || ijk[a] == nodes_[a] - 1)) weights_[idx] *= 0.5;
    }
  }
}

std::shared_ptr<const GridMesh> GridMesh::periodic_box(int n, int cells, double length) {
  return std::make_shared<const GridMesh>(std::vector<int>(n, cells),
                                          std::vector<double>(n, length / cells),
                                          std::vector<bool>(n, true));
}

bool GridMesh::fully_periodic() const {
  for (int a = 0; a < n_; ++a)
    if (!periodic_[a]) return false;
  return true;
}

double GridMesh::cell_volume() const {
  double v = 1.0;
  for (double h : spacing_) v *= h;
  return v;
}

std::array<int, 3> GridMesh::unflatten(Index idx) const {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 0; a < n_; ++a) ijk[a] = static_cast<int>((idx / strides_[a]) % nodes_[a]);
  return ijk;
}

Index GridMesh::flatten(const std::array<int, 3>& ijk) const {
  Index idx = 0;
  for (int a = 0; a < n_; ++a) idx += ijk[a] * strides_[a];
  return idx;
}

std::array<double, 3> GridMesh::position(Index idx) const {
  const auto ijk = unflatten(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < n_; ++a) x[a] = coordinate(a, ijk[a]);
  return x;
}

bool GridMesh::on_boundary(Index idx) const {
  const auto ijk = unflatten(idx);
  for (int a = 0; a < n_; ++a) {
    if (!periodic_[a] && (ijk[a] == 0 || ijk[a] == nodes_[a] - 1)) return true;
  }
  return false;
}

bool GridMesh::operator==(const GridMesh& other) const {
  return cells_ == other.cells_ && spacing_ == other.spacing_ && periodic_ == other.periodic_;
}

Field partial(const GridMesh& mesh, const Field& f, int axis) {
  const Index n = mesh.node_count();
  const Index stride = mesh.stride(axis);
  const int nodes = mesh.nodes(axis);
  const double inv2h = 0.5 / mesh.spacing(axis);
  const bool periodic = mesh.periodic(axis);
  Field out(n);
  for (Index idx = 0; idx < n; ++idx) {
    const int i = static_cast<int>((idx / stride) % nodes);
    if (periodic) {
      const Index up = (i == nodes - 1) ? idx - (nodes - 1) * stride : idx + stride;
      const Index down = (i == 0) ? idx + (nodes - 1) * stride : idx - stride;
      out[idx] = (f[up] - f[down]) * inv2h;
    } else if (i == 0) {
      out[idx] = (-3.0 * f[idx] + 4.0 * f[idx + stride] - f[idx + 2 * stride]) * inv2h;
    } else if (i == nodes - 1) {
      out[idx] = (3.0 * f[idx] - 4.0 * f[idx - stride] + f[idx - 2 * stride]) * inv2h;
    } else {
      out[idx] = (f[idx + stride] - f[idx - stride]) * inv2h;
    }
  }
  return out;
}

}  // namespace dforms
