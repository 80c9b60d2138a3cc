#pragma once

#include "dforms/solver/state.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace dforms {

/// Uniform base state plus seeded smooth perturbations. The magnetic field is
/// beta = beta0 + d(alpha) with a random potential alpha of degree n - 2, so
/// beta stays closed. Velocity perturbations vanish on bounded boundaries.
struct InitialProfile {
  std::string name = "random";  ///< "random" or "sine_field"
  double n1 = 1.0;
  double n2 = 1.0;
  double s = 0.5;
  std::array<double, 3> velocity{0.0, 0.0, 0.0};
  std::array<double, 3> field{0.0, 0.0, 0.0};  ///< uniform B0
  double density_amplitude = 0.0;               ///< relative, applied to n1 and n2
  double entropy_amplitude = 0.0;
  double velocity_amplitude = 0.0;
  double potential_amplitude = 0.0;
  /// "sine_field": B_0 += field_amplitude sin(2 pi x_1 / L_1).
  double field_amplitude = 0.0;
  int modes = 2;  ///< largest wavenumber per axis of the random modes
  std::uint64_t seed = 1;
};

/// M1, M2 convert the velocity profile into momentum m = rho u.
FluidState make_initial_state(const MeshPtr& mesh, const InitialProfile& profile, double M1, double M2);

/// Smooth random field: sum of Fourier modes with wavenumbers up to `modes`
/// per axis, coefficients ~ N(0, 1) / (1 + |k|^2), max-normalized to 1.
Field smooth_random_field(const GridMesh& mesh, int modes, std::uint64_t seed);

}  // namespace dforms
