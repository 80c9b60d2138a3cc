#include "dforms/thermo/closure.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/multi_index.hpp"
#include "dforms/grid/operators.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace dforms {

namespace mi = multi_index;

CouplingOperator coupling_operator(const ProcessDescriptor& flux_of, const ProcessDescriptor& driven_by, int n) {
  if (flux_of.kind == AffinityKind::Viscous || driven_by.kind == AffinityKind::Viscous) return CouplingOperator::None;
  if (driven_by.action == flux_of.action && driven_by.degree == flux_of.degree) return CouplingOperator::Hodge;
  if (driven_by.action != flux_of.action && driven_by.degree == n - flux_of.degree) return CouplingOperator::Identity;
  return CouplingOperator::None;
}

void require_positive(const Field& f, const std::string& what) {
  for (Index i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) {
      throw ThermodynamicDomainError(what + " is not positive at node " + std::to_string(i) + " (value " +
                                     std::to_string(f[i]) + ")");
    }
  }
}

// --- ClosureSpec -------------------------------------------------------------

ClosureSpec::ClosureSpec(std::vector<ProcessDescriptor> processes, Eigen::MatrixXd kappa,
                         ViscosityCoefficients viscosity)
    : processes_(std::move(processes)), kappa_(std::move(kappa)), viscosity_(viscosity) {
  const auto m = static_cast<Eigen::Index>(processes_.size());
  if (kappa_.rows() != m || kappa_.cols() != m) {
    throw ClosureError("kappa must be " + std::to_string(m) + " x " + std::to_string(m));
  }
  for (const auto& p : processes_) {
    if (p.kind == AffinityKind::Viscous) {
      throw ClosureError("process '" + p.name + "': viscous channels are set through the viscosity coefficients");
    }
  }
}

int ClosureSpec::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < processes_.size(); ++i)
    if (processes_[i].name == name) return static_cast<int>(i);
  return -1;
}

void ClosureSpec::set_fiber_operator(int alpha, int beta, Eigen::MatrixXd op) {
  fiber_ops_[{alpha, beta}] = std::move(op);
  validated_ = false;
}

const Eigen::MatrixXd* ClosureSpec::fiber_operator(int alpha, int beta) const {
  const auto it = fiber_ops_.find({alpha, beta});
  return it == fiber_ops_.end() ? nullptr : &it->second;
}

void ClosureSpec::set_coefficient_hook(CoefficientHook hook) {
  hook_ = std::move(hook);
  validated_ = false;
}

void ClosureSpec::set_molar_masses(std::vector<double> masses) {
  masses_ = std::move(masses);
  validated_ = false;
}

const OnsagerReport& ClosureSpec::validate(int n) {
  report_ = validate_onsager(*this, n);
  if (!report_.passed) {
    std::string msg = "closure failed validation:";
    for (const auto& v : report_.reciprocity) {
      msg += " reciprocity(" + v.alpha + ", " + v.beta + ")";
    }
    for (const auto& b : report_.blocks)
      if (!b.psd) msg += " psd(" + to_string(b.parity) + ")";
    for (const auto& c : report_.curie_violations) msg += " curie(" + c + ")";
    for (const auto& c : report_.viscosity_violations) msg += " viscosity(" + c + ")";
    throw ClosureError(msg);
  }
  validated_ = true;
  validated_dim_ = n;
  return report_;
}

ClosureSpec mhd_closure(const MhdCoefficients& c, double M1, double M2) {
  using curie::Action;
  std::vector<ProcessDescriptor> procs = {
      {"heat", AffinityKind::Continuous, 1, Action::Right, Parity::Even, {}, {}},
      {"diffusion", AffinityKind::Continuous, 1, Action::Right, Parity::Even, {1.0 / M1, -1.0 / M2}, {}},
      {"resistive", AffinityKind::Continuous, 2, Action::Left, Parity::Odd, {}, {}},
      {"reaction", AffinityKind::Discrete, 0, Action::Right, Parity::Even, {1.0 / M1, -1.0 / M2}, {}},
  };
  Eigen::MatrixXd K(4, 4);
  K << c.kappa_ss, c.kappa_sn, -c.kappa_Bs, 0.0,  //
      c.kappa_sn, c.kappa_nn, -c.kappa_Bn, 0.0,   //
      c.kappa_Bs, c.kappa_Bn, c.kappa_BB, 0.0,    //
      0.0, 0.0, 0.0, c.kappa_nu;
  ClosureSpec spec(std::move(procs), K, c.viscosity);
  spec.set_molar_masses({M1, M2});
  return spec;
}

// --- validation --------------------------------------------------------------

namespace {

Eigen::MatrixXd hodge_matrix(int n, int k) {
  const auto& b = mi::basis(n, k);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(mi::binomial(n, n - k), static_cast<Eigen::Index>(b.size()));
  for (std::size_t p = 0; p < b.size(); ++p) {
    H(mi::position(n, mi::full_mask(n) & ~b[p]), static_cast<Eigen::Index>(p)) = mi::hodge_sign(n, b[p]);
  }
  return H;
}

// x ^ j = x^T W j for x of degree l and j of degree n - l.
Eigen::MatrixXd wedge_matrix(int n, int l) {
  const auto& bx = mi::basis(n, l);
  const auto& bj = mi::basis(n, n - l);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bx.size()), static_cast<Eigen::Index>(bj.size()));
  for (std::size_t p = 0; p < bx.size(); ++p)
    for (std::size_t q = 0; q < bj.size(); ++q)
      W(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = mi::shuffle_sign(bx[p], bj[q]);
  return W;
}

// Fiber operator from the affinity of beta to the flux of alpha.
Eigen::MatrixXd fiber_block(const ClosureSpec& spec, int a, int b, int n) {
  const auto& pa = spec.processes()[static_cast<std::size_t>(a)];
  const auto& pb = spec.processes()[static_cast<std::size_t>(b)];
  if (const auto* op = spec.fiber_operator(a, b)) return *op;
  const double k = spec.kappa()(a, b);
  const int rows = mi::binomial(n, n - pa.degree);
  const int cols = mi::binomial(n, pb.degree);
  switch (coupling_operator(pa, pb, n)) {
    case CouplingOperator::Hodge:
      return k * hodge_matrix(n, pb.degree);
    case CouplingOperator::Identity:
      return k * Eigen::MatrixXd::Identity(rows, cols);
    case CouplingOperator::None:
      break;
  }
  return Eigen::MatrixXd::Zero(rows, cols);
}

double min_sym_eigenvalue(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double spectral_norm(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()[0];
}

}  // namespace

OnsagerReport validate_onsager(const ClosureSpec& spec, int n) {
  OnsagerReport r;
  const int m = spec.size();
  const auto& procs = spec.processes();
  const auto& K = spec.kappa();
  r.kappa_norm = spectral_norm(K);

  for (const auto& p : procs) {
    if (p.degree < 0 || p.degree > n) {
      throw ClosureError("process '" + p.name + "' has affinity degree outside [0, " + std::to_string(n) + "]");
    }
    if (!spec.molar_masses().empty() && p.kind == AffinityKind::Discrete) {
      if (auto w = mass_balance_warning(p, spec.molar_masses())) r.warnings.push_back(*w);
    }
  }

  // Fiber-level quadratic form G_ab = W_a Op_ab: entropy production is x^T G x.
  std::vector<int> offset(static_cast<std::size_t>(m) + 1, 0);
  for (int a = 0; a < m; ++a) offset[a + 1] = offset[a] + mi::binomial(n, procs[a].degree);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(offset[m], offset[m]);
  for (int a = 0; a < m; ++a) {
    const Eigen::MatrixXd W = wedge_matrix(n, procs[a].degree);
    for (int b = 0; b < m; ++b) {
      const Eigen::MatrixXd op = fiber_block(spec, a, b, n);
      if (op.rows() != W.cols() || op.cols() != mi::binomial(n, procs[b].degree)) {
        throw ClosureError("fiber operator (" + procs[a].name + ", " + procs[b].name + ") has the wrong shape");
      }
      G.block(offset[a], offset[b], W.rows(), op.cols()) = W * op;
      const bool isotropic = spec.fiber_operator(a, b) == nullptr;
      if (isotropic && K(a, b) != 0.0 && coupling_operator(procs[a], procs[b], n) == CouplingOperator::None) {
        r.curie_violations.push_back(procs[a].name + " <- " + procs[b].name);
      }
    }
  }
  const double gnorm = spectral_norm(G);

  // Reciprocity on the pairing: G_ab = +G_ba^T within a parity, -G_ba^T across.
  const double rtol = 1e-12 * std::max(gnorm, 1e-300);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const bool cross = procs[a].parity != procs[b].parity;
      const double s = cross ? -1.0 : 1.0;
      const Eigen::MatrixXd Gab = G.block(offset[a], offset[b], offset[a + 1] - offset[a], offset[b + 1] - offset[b]);
      const Eigen::MatrixXd Gba = G.block(offset[b], offset[a], offset[b + 1] - offset[b], offset[a + 1] - offset[a]);
      if ((Gab - s * Gba.transpose()).cwiseAbs().maxCoeff() > rtol) {
        r.reciprocity.push_back({procs[a].name, procs[b].name, K(a, b), K(b, a), cross});
      }
    }
  }

  // Positivity of the symmetric part per parity block.
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    std::vector<int> idx;
    for (int a = 0; a < m; ++a)
      if (procs[a].parity == parity) idx.push_back(a);
    if (idx.empty()) continue;
    BlockStatus st;
    st.parity = parity;
    Eigen::MatrixXd Kb(idx.size(), idx.size());
    std::vector<int> fiber_idx;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      st.members.push_back(procs[idx[i]].name);
      for (std::size_t j = 0; j < idx.size(); ++j) Kb(i, j) = K(idx[i], idx[j]);
      for (int f = offset[idx[i]]; f < offset[idx[i] + 1]; ++f) fiber_idx.push_back(f);
    }
    Eigen::MatrixXd Gb(fiber_idx.size(), fiber_idx.size());
    for (std::size_t i = 0; i < fiber_idx.size(); ++i)
      for (std::size_t j = 0; j < fiber_idx.size(); ++j) Gb(i, j) = G(fiber_idx[i], fiber_idx[j]);
    st.min_eigenvalue = min_sym_eigenvalue(Kb);
    st.fiber_min_eigenvalue = min_sym_eigenvalue(Gb);
    st.psd = st.min_eigenvalue >= -1e-10 * r.kappa_norm && st.fiber_min_eigenvalue >= -1e-10 * gnorm;
    r.blocks.push_back(std::move(st));
  }

  const auto& v = spec.viscosity();
  if (v.homothety < 0) r.viscosity_violations.push_back("homothety");
  if (v.traceless < 0) r.viscosity_violations.push_back("traceless");
  if (v.skew < 0) r.viscosity_violations.push_back("skew");

  r.passed = r.reciprocity.empty() && r.curie_violations.empty() && r.viscosity_violations.empty();
  for (const auto& b : r.blocks) r.passed = r.passed && b.psd;
  return r;
}

std::string OnsagerReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed;
  j["kappa_norm"] = kappa_norm;
  j["reciprocity_violations"] = nlohmann::ordered_json::array();
  for (const auto& v : reciprocity) {
    j["reciprocity_violations"].push_back({{"alpha", v.alpha},
                                           {"beta", v.beta},
                                           {"kappa_ab", v.kappa_ab},
                                           {"kappa_ba", v.kappa_ba},
                                           {"rule", v.cross_parity ? "antisymmetric" : "symmetric"}});
  }
  j["parity_blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : blocks) {
    j["parity_blocks"].push_back({{"parity", to_string(b.parity)},
                                  {"members", b.members},
                                  {"min_eigenvalue", b.min_eigenvalue},
                                  {"fiber_min_eigenvalue", b.fiber_min_eigenvalue},
                                  {"psd", b.psd}});
  }
  j["curie_violations"] = curie_violations;
  j["viscosity_violations"] = viscosity_violations;
  j["warnings"] = warnings;
  return j.dump(2);
}

// --- affinities and fluxes -----------------------------------------------------

DiscreteForm affinity_continuous(const DiscreteForm& dual) { return exterior_derivative(dual); }

DiscreteForm affinity_discrete(const std::vector<DiscreteForm>& duals, const std::vector<double>& lambdas) {
  if (duals.empty() || duals.size() != lambdas.size()) {
    throw ClosureError("affinity_discrete needs one coefficient per dual variable");
  }
  DiscreteForm x(duals[0].mesh_ptr(), duals[0].degree());
  for (std::size_t i = 0; i < duals.size(); ++i) {
    if (duals[i].degree() != x.degree()) throw DegreeError("dual variables of a discrete process must share a degree");
    x.add_scaled(duals[i], lambdas[i]);
  }
  return x;
}

std::vector<DiscreteForm> apply_closure(const ClosureSpec& spec, const std::vector<DiscreteForm>& affinities,
                                        const Field* scale) {
  if (!spec.validated()) throw ClosureError("closure must be validated before it is applied");
  const int m = spec.size();
  if (static_cast<int>(affinities.size()) != m) {
    throw ClosureError("expected " + std::to_string(m) + " affinities, got " + std::to_string(affinities.size()));
  }
  const auto& procs = spec.processes();
  const int n = affinities.empty() ? spec.validated_dim() : affinities[0].dim();
  if (n != spec.validated_dim()) throw ClosureError("closure was validated for a different dimension");
  for (int b = 0; b < m; ++b) {
    if (affinities[b].degree() != procs[b].degree) {
      throw DegreeError("affinity of '" + procs[b].name + "' has degree " + std::to_string(affinities[b].degree()) +
                        ", expected " + std::to_string(procs[b].degree));
    }
  }
  std::vector<DiscreteForm> fluxes;
  fluxes.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    DiscreteForm j(affinities[a].mesh_ptr(), n - procs[a].degree);
    for (int b = 0; b < m; ++b) {
      const DiscreteForm& x = affinities[b];
      if (const auto* op = spec.fiber_operator(a, b)) {
        for (int r = 0; r < j.component_count(); ++r)
          for (int c = 0; c < x.component_count(); ++c)
            if ((*op)(r, c) != 0.0) j[r] += (*op)(r, c) * x[c];
        continue;
      }
      const double k = spec.kappa()(a, b);
      if (k == 0.0) continue;
      switch (coupling_operator(procs[a], procs[b], n)) {
        case CouplingOperator::Hodge:
          j.add_scaled(hodge(x), k);
          break;
        case CouplingOperator::Identity:
          j.add_scaled(x, k);
          break;
        case CouplingOperator::None:
          throw ClosureError("no isotropic coupling from '" + procs[b].name + "' to the flux of '" + procs[a].name + "'");
      }
    }
    if (scale) j.scale_by(*scale);
    fluxes.push_back(std::move(j));
  }
  return fluxes;
}

DiscreteForm entropy_production_density(const std::vector<DiscreteForm>& affinities,
                                        const std::vector<DiscreteForm>& fluxes, const DiscreteForm& T) {
  if (affinities.size() != fluxes.size()) throw ClosureError("affinity and flux lists differ in length");
  if (T.degree() != 0) throw DegreeError("temperature must be a 0-form");
  require_positive(T[0], "temperature");
  DiscreteForm out(T.mesh_ptr(), T.dim());
  for (std::size_t a = 0; a < affinities.size(); ++a) out += wedge(affinities[a], fluxes[a]);
  out[0] /= T[0];
  return out;
}

}  // namespace dforms
