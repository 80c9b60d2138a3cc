#include "dforms/curie/fiber.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/multi_index.hpp"

#include <random>

namespace dforms::curie {

namespace mi = dforms::multi_index;

Action opposite(Action a) { return a == Action::Right ? Action::Left : Action::Right; }

FiberRep FiberRep::form(int n, int degree, Action action) {
  if (degree < 0 || degree > n) throw DegreeError("fiber degree outside [0, n]");
  FiberRep r;
  r.kind = Kind::Form;
  r.n = n;
  r.degree = degree;
  r.action = action;
  return r;
}

FiberRep FiberRep::tensor(int n) {
  FiberRep r;
  r.kind = Kind::Tensor;
  r.n = n;
  return r;
}

FiberRep FiberRep::tensor_channel(int n, TensorChannel channel) {
  FiberRep r;
  r.kind = Kind::Channel;
  r.n = n;
  r.channel = channel;
  return r;
}

int FiberRep::dim() const {
  switch (kind) {
    case Kind::Form:
      return mi::binomial(n, degree);
    case Kind::Tensor:
      return n * n;
    case Kind::Channel:
      break;
  }
  switch (channel) {
    case TensorChannel::Homothety:
      return 1;
    case TensorChannel::Traceless:
      return n * (n + 1) / 2 - 1;
    case TensorChannel::Skew:
      return n * (n - 1) / 2;
  }
  return 0;
}

Eigen::MatrixXd FiberRep::matrix(const Eigen::MatrixXd& R) const {
  if (kind == Kind::Form) {
    Eigen::MatrixXd C = compound_matrix(R, degree);
    if (action == Action::Left) C *= R.determinant();
    return C;
  }
  // R S R^T on the row-major vectorization: (R (x) R).
  const int d = n * n;
  Eigen::MatrixXd K(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) K(i * n + j, k * n + l) = R(i, k) * R(j, l);
  if (kind == Kind::Tensor) return K;
  const Eigen::MatrixXd B = channel_basis(n, channel);
  return B.transpose() * K * B;
}

FiberRep FiberRep::flux_dual() const {
  if (kind == Kind::Form) return form(n, n - degree, opposite(action));
  return *this;
}

std::string FiberRep::label() const {
  switch (kind) {
    case Kind::Form:
      return std::to_string(degree) + (action == Action::Right ? ">" : "<");
    case Kind::Tensor:
      return "tensor";
    case Kind::Channel:
      break;
  }
  switch (channel) {
    case TensorChannel::Homothety:
      return "tensor:homothety";
    case TensorChannel::Traceless:
      return "tensor:traceless";
    case TensorChannel::Skew:
      return "tensor:skew";
  }
  return "?";
}

bool FiberRep::operator==(const FiberRep& o) const {
  if (kind != o.kind || n != o.n) return false;
  if (kind == Kind::Form) return degree == o.degree && action == o.action;
  if (kind == Kind::Channel) return channel == o.channel;
  return true;
}

Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& R, int k) {
  const int n = static_cast<int>(R.rows());
  const auto& basis = mi::basis(n, k);
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd C(m, m);
  std::vector<int> rows, cols;
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      rows.clear();
      cols.clear();
      for (int i = 0; i < n; ++i) {
        if (basis[p] & (1u << i)) rows.push_back(i);
        if (basis[q] & (1u << i)) cols.push_back(i);
      }
      Eigen::MatrixXd sub(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) sub(a, b) = R(rows[a], cols[b]);
      C(p, q) = k == 0 ? 1.0 : sub.determinant();
    }
  }
  return C;
}

Eigen::MatrixXd channel_basis(int n, TensorChannel channel) {
  std::vector<Eigen::VectorXd> cols;
  auto unit = [n](int i, int j) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n * n);
    v[i * n + j] = 1.0;
    return v;
  };
  switch (channel) {
    case TensorChannel::Homothety: {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n * n);
      for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
      cols.push_back(v / std::sqrt(double(n)));
      break;
    }
    case TensorChannel::Skew:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) cols.push_back((unit(i, j) - unit(j, i)) / std::sqrt(2.0));
      break;
    case TensorChannel::Traceless: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) cols.push_back((unit(i, j) + unit(j, i)) / std::sqrt(2.0));
      // Diagonal trace-free directions e_0 - e_i, orthonormalized below.
      for (int i = 1; i < n; ++i) cols.push_back(unit(0, 0) - unit(i, i));
      break;
    }
  }
  Eigen::MatrixXd B(n * n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) B.col(static_cast<Eigen::Index>(c)) = cols[c];
  return Eigen::HouseholderQR<Eigen::MatrixXd>(B).householderQ() *
         Eigen::MatrixXd::Identity(n * n, B.cols());
}

std::vector<Eigen::MatrixXd> sample_group(int n, int count, bool include_reflections, std::uint64_t seed) {
  if (count < 1) throw Error("sample_group needs count >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd Rm = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (Rm(j, j) < 0) Q.col(j) *= -1.0;
    const double want = (include_reflections && s % 2 == 1) ? -1.0 : 1.0;
    if (Q.determinant() * want < 0) Q.col(0) *= -1.0;
    out.push_back(std::move(Q));
  }
  return out;
}

}  // namespace dforms::curie
