#pragma once

#include "dforms/grid/fields.hpp"
#include "dforms/thermo/process.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dforms {

struct ViscosityCoefficients {
  double homothety = 0.0;  ///< kappa^h, bulk part
  double traceless = 0.0;  ///< kappa^0, shear part
  double skew = 0.0;       ///< kappa^a, rotational part
};

/// Pointwise operator linking the affinity of process beta to the flux of
/// process alpha under isotropy.
enum class CouplingOperator {
  None,      ///< forbidden by Curie's principle
  Identity,  ///< affinity and flux share the fiber (k = n - l, opposite actions)
  Hodge,     ///< equal degrees and actions: the flux is star of the affinity
};

CouplingOperator coupling_operator(const ProcessDescriptor& flux_of, const ProcessDescriptor& driven_by, int n);

/// Pointwise multiplier for every coefficient, evaluated from temperature and
/// mass density (nodal fields). Must return values >= 0.
using CoefficientHook = std::function<Field(const Field& T, const Field& rho)>;

struct OnsagerViolation {
  std::string alpha;
  std::string beta;
  double kappa_ab = 0.0;
  double kappa_ba = 0.0;
  bool cross_parity = false;
};

struct BlockStatus {
  Parity parity = Parity::Even;
  std::vector<std::string> members;
  /// Smallest eigenvalue of the symmetric part of the scalar block.
  double min_eigenvalue = 0.0;
  /// Same test on the fiber-level quadratic form (differs only for identity
  /// couplings inside one parity block or anisotropic operators).
  double fiber_min_eigenvalue = 0.0;
  bool psd = true;
};

struct OnsagerReport {
  bool passed = true;
  std::vector<OnsagerViolation> reciprocity;
  std::vector<BlockStatus> blocks;
  /// Nonzero couplings with no isotropic intertwiner ("alpha <- beta").
  std::vector<std::string> curie_violations;
  std::vector<std::string> viscosity_violations;
  std::vector<std::string> warnings;
  double kappa_norm = 0.0;

  std::string to_json() const;
};

/// Linear flux-force closure over a list of non-viscous processes plus the
/// three viscosity coefficients. Must be validated before use; any mutation
/// clears the validated flag.
class ClosureSpec {
 public:
  ClosureSpec() = default;
  ClosureSpec(std::vector<ProcessDescriptor> processes, Eigen::MatrixXd kappa, ViscosityCoefficients viscosity = {});

  const std::vector<ProcessDescriptor>& processes() const { return processes_; }
  const Eigen::MatrixXd& kappa() const { return kappa_; }
  const ViscosityCoefficients& viscosity() const { return viscosity_; }
  int size() const { return static_cast<int>(processes_.size()); }
  /// Position of the named process; -1 if absent.
  int index_of(const std::string& name) const;

  /// Replaces kappa(alpha, beta) * op by a constant C(n, n - l_alpha) x C(n, l_beta)
  /// matrix acting on fiber components (anisotropic media).
  void set_fiber_operator(int alpha, int beta, Eigen::MatrixXd op);
  const Eigen::MatrixXd* fiber_operator(int alpha, int beta) const;

  void set_coefficient_hook(CoefficientHook hook);
  const CoefficientHook& coefficient_hook() const { return hook_; }

  /// Molar masses used for the discrete-process mass-balance warning.
  void set_molar_masses(std::vector<double> masses);

  /// Runs validate_onsager; throws ClosureError listing failures, otherwise
  /// marks the spec validated.
  const OnsagerReport& validate(int n);
  bool validated() const { return validated_; }
  int validated_dim() const { return validated_dim_; }

  const std::vector<double>& molar_masses() const { return masses_; }

 private:
  std::vector<ProcessDescriptor> processes_;
  Eigen::MatrixXd kappa_;
  ViscosityCoefficients viscosity_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> fiber_ops_;
  CoefficientHook hook_;
  std::vector<double> masses_;
  OnsagerReport report_;
  bool validated_ = false;
  int validated_dim_ = 0;
};

/// Coefficients of the two-species MHD closure.
struct MhdCoefficients {
  double kappa_ss = 0.0;  ///< heat conduction
  double kappa_sn = 0.0;  ///< thermal diffusion cross-effect
  double kappa_nn = 0.0;  ///< species diffusion
  double kappa_Bs = 0.0;  ///< resistive-thermal cross-effect (odd)
  double kappa_Bn = 0.0;  ///< resistive-diffusive cross-effect (odd)
  double kappa_BB = 0.0;  ///< resistivity
  double kappa_nu = 0.0;  ///< reaction rate
  ViscosityCoefficients viscosity;
};

/// Processes heat (1>, A+), diffusion (1>, A+, lambdas (1/M1, -1/M2)),
/// resistive (2<, A-) and reaction (0>, A+, lambdas (1/M1, -1/M2)), with
/// matrix
///   [ k_ss  k_sn  -k_Bs  0    ]
///   [ k_sn  k_nn  -k_Bn  0    ]
///   [ k_Bs  k_Bn   k_BB  0    ]
///   [ 0     0      0     k_nu ].
ClosureSpec mhd_closure(const MhdCoefficients& c, double M1, double M2);

OnsagerReport validate_onsager(const ClosureSpec& spec, int n);

/// x = d(dual).
DiscreteForm affinity_continuous(const DiscreteForm& dual);
/// x = sum_i lambda_i dual_i.
DiscreteForm affinity_discrete(const std::vector<DiscreteForm>& duals, const std::vector<double>& lambdas);

/// j_alpha = sum_beta kappa_ab op_ab x^beta, optionally scaled pointwise.
std::vector<DiscreteForm> apply_closure(const ClosureSpec& spec, const std::vector<DiscreteForm>& affinities,
                                        const Field* scale = nullptr);

/// (1/T) sum_alpha x^alpha ^ j_alpha. Throws ThermodynamicDomainError if T <= 0 anywhere.
DiscreteForm entropy_production_density(const std::vector<DiscreteForm>& affinities,
                                        const std::vector<DiscreteForm>& fluxes, const DiscreteForm& T);

/// Throws ThermodynamicDomainError naming `what` if any value is not > 0.
void require_positive(const Field& f, const std::string& what);

}  // namespace dforms
