#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace dforms::curie {

/// How O(n) acts on a form fiber: R |> w (Right) or R <| w = det(R) (R |> w) (Left).
enum class Action { Right, Left };

/// Irreducible blocks of the mixed tensor fiber T (x) T*.
enum class TensorChannel { Homothety, Traceless, Skew };

Action opposite(Action a);

/// Fiber representation of O(n): a k-form fiber with a given action, the full
/// mixed tensor fiber, or one irreducible channel of it.
struct FiberRep {
  enum class Kind { Form, Tensor, Channel };

  Kind kind = Kind::Form;
  int n = 3;
  int degree = 0;
  Action action = Action::Right;
  TensorChannel channel = TensorChannel::Homothety;

  static FiberRep form(int n, int degree, Action action);
  static FiberRep tensor(int n);
  static FiberRep tensor_channel(int n, TensorChannel channel);

  int dim() const;
  /// Representation matrix of the orthogonal matrix R.
  Eigen::MatrixXd matrix(const Eigen::MatrixXd& R) const;
  /// Fiber in which the conjugate flux lives (k|> pairs with (n-k)<|).
  FiberRep flux_dual() const;
  /// Short label: "1>", "2<", "tensor", "tensor:skew".
  std::string label() const;

  bool operator==(const FiberRep& other) const;
};

/// k x k minors det R[I, J] over the storage basis of k-forms.
Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& R, int k);

/// Orthonormal basis (columns, row-major vectorization) of one tensor channel.
Eigen::MatrixXd channel_basis(int n, TensorChannel channel);

/// Haar-distributed orthogonal matrices from QR of Gaussian matrices with the
/// sign of R's diagonal fixed. With reflections, determinants alternate +1/-1
/// so exactly half are reflections (odd counts favour +1).
std::vector<Eigen::MatrixXd> sample_group(int n, int count, bool include_reflections, std::uint64_t seed);

}  // namespace dforms::curie
