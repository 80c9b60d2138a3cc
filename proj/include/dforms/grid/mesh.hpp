#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace dforms {

using Field = Eigen::ArrayXd;
using Index = Eigen::Index;

/// Uniform Cartesian grid in 2 or 3 dimensions with nodal storage.
///
/// A periodic axis with N cells carries N nodes (x_i = i h, i < N). A bounded
/// axis with N cells carries N + 1 nodes; the first and last node layers are
/// the boundary (ghost) layer on which boundary traces and boundary data live.
/// Orientation is fixed right-handed: dx^1 ^ ... ^ dx^n is positive.
class GridMesh {
 public:
  static constexpr int kMinCells = 4;

  GridMesh(std::vector<int> cells, std::vector<double> spacing, std::vector<bool> periodic);

  /// Periodic cube [0, length)^n with `cells` cells per axis.
  static std::shared_ptr<const GridMesh> periodic_box(int n, int cells, double length);

  int dim() const { return n_; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  bool periodic(int axis) const { return periodic_[axis]; }
  bool fully_periodic() const;
  /// Width of the boundary node layer on each side of a bounded axis (0 if periodic).
  int ghost_width(int axis) const { return periodic_[axis] ? 0 : 1; }

  int nodes(int axis) const { return nodes_[axis]; }
  Index node_count() const { return count_; }
  Index stride(int axis) const { return strides_[axis]; }
  double length(int axis) const { return cells_[axis] * spacing_[axis]; }
  double cell_volume() const;

  double coordinate(int axis, int i) const { return i * spacing_[axis]; }
  /// Per-axis node index of a flat (row-major) node index.
  std::array<int, 3> unflatten(Index idx) const;
  Index flatten(const std::array<int, 3>& ijk) const;
  std::array<double, 3> position(Index idx) const;

  bool on_boundary(Index idx) const;

  /// Nodal quadrature weights: cell volume, halved on boundary layers of bounded axes.
  const Field& quadrature_weights() const { return weights_; }

  bool operator==(const GridMesh& other) const;
  bool operator!=(const GridMesh& other) const { return !(*this == other); }

 private:
  int n_;
  std::vector<int> cells_;
  std::vector<double> spacing_;
  std::vector<bool> periodic_;
  std::vector<int> nodes_;
  std::vector<Index> strides_;
  Index count_ = 0;
  Field weights_;
};

using MeshPtr = std::shared_ptr<const GridMesh>;

/// Centered second-order difference along `axis`; one-sided second order on
/// the boundary layers of bounded axes.
Field partial(const GridMesh& mesh, const Field& f, int axis);

}  // namespace dforms
