#pragma once

#include "dforms/curie/fiber.hpp"

#include <map>
#include <string>
#include <vector>

namespace dforms::curie {

struct IntertwinerBasis {
  FiberRep source;
  FiberRep target;
  /// dim(target) x dim(source) matrices, Frobenius-orthonormal.
  std::vector<Eigen::MatrixXd> basis;
  /// Largest commutant violation over the samples used to build the basis.
  double residual = 0.0;

  int dimension() const { return static_cast<int>(basis.size()); }
};

inline constexpr int kMinSamples = 50;
inline constexpr double kNullThreshold = 1e-8;
inline constexpr double kGapCeiling = 1e-5;

/// Nullspace of the stacked commutant equations A2(R) M - M A1(R) = 0.
/// Throws ResampleError with fewer than kMinSamples samples or when a singular
/// value falls in the ambiguous band (kNullThreshold, kGapCeiling) * s, with
/// s = max(sigma_max, sqrt(#samples)).
IntertwinerBasis intertwiner_space(const FiberRep& source, const FiberRep& target,
                                   const std::vector<Eigen::MatrixXd>& samples);

/// max_R ||A2(R) M - M A1(R)|| over the given samples and basis elements.
double commutant_residual(const IntertwinerBasis& space, const std::vector<Eigen::MatrixXd>& samples);

struct TensorParts {
  Eigen::MatrixXd homothety;
  Eigen::MatrixXd traceless;
  Eigen::MatrixXd skew;
};

/// S = (tr S / n) I + (sym S - tr S / n I) + skew S.
TensorParts decompose_tensor(const Eigen::MatrixXd& S);

/// Entry (a, b) is true iff an affinity in fibers[b] may drive the flux
/// conjugate to fibers[a], i.e. Hom(fibers[b], fibers[a].flux_dual()) != 0.
std::vector<std::vector<bool>> admissible_pattern(const std::vector<FiberRep>& fibers,
                                                  const std::vector<Eigen::MatrixXd>& samples);

struct DimensionEntry {
  FiberRep source;
  FiberRep target;
  int dimension = 0;
  double residual = 0.0;
};

/// Hom dimensions for every (k, action) -> (l, action) pair of form fibers in dimension n.
std::vector<DimensionEntry> form_dimension_table(int n, const std::vector<Eigen::MatrixXd>& samples);

}  // namespace dforms::curie
