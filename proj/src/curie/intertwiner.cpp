#include "dforms/curie/intertwiner.hpp"

#include "dforms/core/error.hpp"

#include <cmath>
#include <map>

namespace dforms::curie {

namespace {

// Rows d1*d2 of (I (x) A2 - A1^T (x) I) acting on column-major vec(M).
void commutant_block(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2, Eigen::MatrixXd& out,
                     Eigen::Index row0) {
  const Eigen::Index d1 = A1.rows();
  const Eigen::Index d2 = A2.rows();
  for (Eigen::Index c = 0; c < d1; ++c) {
    // column c of A2 M - M A1: A2 M[:, c] - sum_j M[:, j] A1(j, c)
    for (Eigen::Index r = 0; r < d2; ++r) {
      const Eigen::Index row = row0 + c * d2 + r;
      for (Eigen::Index k = 0; k < d2; ++k) out(row, c * d2 + k) += A2(r, k);
      for (Eigen::Index j = 0; j < d1; ++j) out(row, j * d2 + r) -= A1(j, c);
    }
  }
}

}  // namespace

IntertwinerBasis intertwiner_space(const FiberRep& source, const FiberRep& target,
                                   const std::vector<Eigen::MatrixXd>& samples) {
  if (static_cast<int>(samples.size()) < kMinSamples) {
    throw ResampleError("intertwiner_space needs at least " + std::to_string(kMinSamples) + " samples");
  }
  const Eigen::Index d1 = source.dim();
  const Eigen::Index d2 = target.dim();
  const Eigen::Index block = d1 * d2;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(block * static_cast<Eigen::Index>(samples.size()), block);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    commutant_block(source.matrix(samples[s]), target.matrix(samples[s]), K,
                    static_cast<Eigen::Index>(s) * block);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  // Orthogonal representations have unit-scale blocks, so sqrt(#samples) is the
  // natural size of a nonzero commutant system. The floor keeps the threshold
  // meaningful when every equation is roundoff (trivial-to-trivial maps).
  const double scale = std::max(sv.size() > 0 ? sv[0] : 0.0, std::sqrt(double(samples.size())));

  IntertwinerBasis out{source, target, {}, 0.0};
  for (Eigen::Index i = 0; i < block; ++i) {
    const double s = i < sv.size() ? sv[i] : 0.0;
    if (s > kNullThreshold * scale && s < kGapCeiling * scale) {
      throw ResampleError("no clear singular-value gap between " + source.label() + " and " +
                          target.label() + "; resample");
    }
    if (s > kNullThreshold * scale) continue;
    Eigen::VectorXd v = svd.matrixV().col(i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    out.basis.push_back(Eigen::Map<const Eigen::MatrixXd>(v.data(), d2, d1));
  }
  out.residual = commutant_residual(out, samples);
  return out;
}

double commutant_residual(const IntertwinerBasis& space, const std::vector<Eigen::MatrixXd>& samples) {
  double worst = 0.0;
  for (const auto& R : samples) {
    const Eigen::MatrixXd A1 = space.source.matrix(R);
    const Eigen::MatrixXd A2 = space.target.matrix(R);
    for (const auto& M : space.basis) worst = std::max(worst, (A2 * M - M * A1).norm());
  }
  return worst;
}

TensorParts decompose_tensor(const Eigen::MatrixXd& S) {
  const auto n = S.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  TensorParts p;
  p.homothety = (S.trace() / static_cast<double>(n)) * I;
  p.traceless = sym - p.homothety;
  p.skew = 0.5 * (S - S.transpose());
  return p;
}

std::vector<std::vector<bool>> admissible_pattern(const std::vector<FiberRep>& fibers,
                                                  const std::vector<Eigen::MatrixXd>& samples) {
  const std::size_t m = fibers.size();
  std::vector<std::vector<bool>> out(m, std::vector<bool>(m, false));
  std::map<std::pair<std::string, std::string>, bool> cache;
  for (std::size_t a = 0; a < m; ++a) {
    const FiberRep target = fibers[a].flux_dual();
    for (std::size_t b = 0; b < m; ++b) {
      const auto key = std::make_pair(fibers[b].label(), target.label());
      auto it = cache.find(key);
      if (it == cache.end()) {
        it = cache.emplace(key, intertwiner_space(fibers[b], target, samples).dimension() > 0).first;
      }
      out[a][b] = it->second;
    }
  }
  return out;
}

std::vector<DimensionEntry> form_dimension_table(int n, const std::vector<Eigen::MatrixXd>& samples) {
  std::vector<DimensionEntry> out;
  for (Action a : {Action::Right, Action::Left})
    for (Action b : {Action::Right, Action::Left})
      for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) {
          const auto src = FiberRep::form(n, k, a);
          const auto dst = FiberRep::form(n, l, b);
          const auto space = intertwiner_space(src, dst, samples);
          out.push_back({src, dst, space.dimension(), space.residual});
        }
  return out;
}

}  // namespace dforms::curie
