#pragma once

#include "dforms/solver/advected_system.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dforms {

double total_energy(const AdvectedSystem& system, const SystemState& state);
/// int 1/2 rho |u|^2 + e + |B|^2 / (2 mu0).
double total_energy(const FluidState& state, const EquationOfState& eos, double mu0);

/// int (M1 nu1 + M2 nu2).
double total_mass(const FluidState& state, double M1, double M2);

/// S = Sigma + (S - Sigma): total entropy, produced part int sigma_prod and
/// the exchanged remainder.
struct EntropyBudget {
  double total = 0.0;
  double produced = 0.0;
  double exchanged = 0.0;
};
EntropyBudget entropy_budget(const SystemState& state, int entropy_index);

/// Largest nodal coefficient of d(beta).
double divB_norm(const DiscreteForm& beta);

/// Energy flux G with d_t e = d G in the continuum:
///   G = -(u.m) i_u vol + sum_q (-1)^(n-k_q) b_q ^ i_u a_q
///       + sum_continuous c_a ^ j_a + i_w vol,   w^j = u^i sigma(i, j),
/// where c_a = sum lambda b is the combined dual of process a.
DiscreteForm energy_flux(const AdvectedSystem& system, const SystemState& state, const Evaluation& ev);

/// d_t e - d G with d_t e = u . dm/dt - sum_q b_q ^ da_q/dt from the
/// semi-discrete tangent. Periodic meshes only (throws BoundaryError).
DiscreteForm local_energy_residual(const AdvectedSystem& system, const SystemState& state);

/// sqrt(int r^2) of an n-form coefficient.
double l2_norm(const DiscreteForm& top);

/// Axis-aligned coordinate rectangle at node layer `index` of `normal_axis`,
/// spanning nodes lo[b]..hi[b] on every other axis b. Oriented by the
/// ascending wedge of its spanning axes.
struct FluxSurface {
  int normal_axis = 0;
  int index = 0;
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
};

/// Surface covering every node of the other axes at layer `index`.
FluxSurface full_cross_section(const GridMesh& mesh, int normal_axis, int index);

/// int_S beta with nodal midpoint quadrature. Throws BoundaryError if the
/// surface leaves the mesh or touches a bounded boundary layer.
double surface_flux(const DiscreteForm& beta, const FluxSurface& surface);
/// Line integral of the (n-2)-form j over the boundary of S, with j
/// interpolated to the cell midpoints just outside the node block. Equals the
/// surface integral of dj exactly.
double boundary_circulation(const DiscreteForm& j, const FluxSurface& surface);

struct FluxSample {
  double time = 0.0;
  double flux = 0.0;
  double circulation = 0.0;
};

struct FluxBalanceReport {
  std::vector<double> time;
  std::vector<double> flux_rate;    ///< d/dt int_S beta, fourth-order differences
  std::vector<double> circulation;  ///< boundary line integral of j_beta
  double max_residual = 0.0;
  double relative_residual = 0.0;   ///< max residual / max |circulation|
  double flux_drift = 0.0;          ///< max |flux - flux(0)|
};

/// Compares d/dt int_S beta with the boundary integral of j_beta over a
/// uniformly spaced history (at least 5 samples). Valid at u = 0.
FluxBalanceReport alfven_flux_check(const std::vector<FluxSample>& history);

struct SpeciesInvariant {
  std::vector<double> coefficients;
  bool annihilates = false;  ///< sum_i mu_i lambda_i = 0
  double initial = 0.0;
  double final = 0.0;
  double drift_per_time = 0.0;  ///< max |I(t) - I(0)| / elapsed time
};

/// Drift of I = sum_i mu_i int nu_i for each coefficient vector, from a history
/// of species totals int nu_i. Throws Error on size mismatches.
std::vector<SpeciesInvariant> species_invariants(const std::vector<double>& times,
                                                 const std::vector<std::vector<double>>& totals,
                                                 const std::vector<std::vector<double>>& coefficients,
                                                 const std::vector<double>& lambdas);

/// One row of the diagnostics time series.
struct DiagnosticsReport {
  double time = 0.0;
  long step = 0;
  double energy = 0.0;
  double mass = 0.0;
  double entropy_total = 0.0;
  double entropy_produced = 0.0;
  double entropy_exchanged = 0.0;
  double production_rate = 0.0;   ///< int of the entropy production density
  double flux = 0.0;              ///< int_S beta over the configured surface
  double circulation = 0.0;       ///< boundary integral of j_beta
  double local_energy_residual = 0.0;  ///< NaN on bounded meshes
  double divB = 0.0;
  double mu_max = 0.0;            ///< max |mu|, the reaction affinity
};

/// Evaluates every functional of an MHD state at once.
DiagnosticsReport diagnose(const AdvectedSystem& mhd, const SystemState& state, double time, long step,
                           const std::optional<FluxSurface>& surface);

/// Column names of the CSV time series, in order.
const std::vector<std::string>& report_columns();
std::string csv_header();
/// Round-trip formatted values, same order as report_columns().
std::string csv_row(const DiagnosticsReport& r);

}  // namespace dforms
