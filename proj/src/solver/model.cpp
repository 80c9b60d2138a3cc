#include "dforms/solver/model.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/operators.hpp"
#include "dforms/thermo/closure.hpp"

namespace dforms {

namespace {

Field squared_norm(const VectorField& v) {
  Field out = Field::Zero(v.mesh().node_count());
  for (int i = 0; i < v.dim(); ++i) out += v[i].square();
  return out;
}

DiscreteForm scalar(const MeshPtr& mesh, Field f) { return scalar_form(mesh, std::move(f)); }

}  // namespace

VectorField magnetic_field(const DiscreteForm& beta) { return flux_vector(beta); }

MhdModel::MhdModel(EquationOfState eos, double mu0) : eos_(std::move(eos)), mu0_(mu0) {
  if (!(mu0 > 0.0)) throw ConfigError("mu0 must be positive");
}

ModelDuals MhdModel::duals(const SystemState& state) const {
  const auto fs = FluidState::from_system(state);
  const auto& M = eos_.params();
  const auto th = eos_.evaluate(fs.nu1[0], fs.nu2[0], fs.s[0]);
  const auto& mesh = fs.mesh_ptr();

  ModelDuals d;
  d.rho = th.rho;
  d.u = VectorField(mesh);
  for (int i = 0; i < fs.m.dim(); ++i) d.u[i] = fs.m[i] / th.rho;
  const Field half_u2 = 0.5 * squared_norm(d.u);
  VectorField H = magnetic_field(fs.beta);
  for (int i = 0; i < H.dim(); ++i) H[i] /= mu0_;
  d.b = {scalar(mesh, -(th.mu1 - half_u2 * M.M1)), scalar(mesh, -(th.mu2 - half_u2 * M.M2)), -flat(H),
         scalar(mesh, -th.T)};
  d.T = scalar(mesh, th.T);
  return d;
}

Field MhdModel::energy_density(const SystemState& state) const {
  const auto fs = FluidState::from_system(state);
  const auto th = eos_.evaluate(fs.nu1[0], fs.nu2[0], fs.s[0]);
  Field m2 = Field::Zero(th.rho.size());
  for (int i = 0; i < fs.m.dim(); ++i) m2 += fs.m[i].square();
  return 0.5 * m2 / th.rho + th.e + squared_norm(magnetic_field(fs.beta)) / (2.0 * mu0_);
}

MixtureModel::MixtureModel(int species, double theta, double cv, double T0)
    : species_(species), theta_(theta), cv_(cv), T0_(T0) {
  if (species < 0) throw ConfigError("mixture: species count must be nonnegative");
  if (species > 0 && !(theta > 0.0)) throw ConfigError("mixture: theta must be positive");
  if (!(cv > 0.0) || !(T0 > 0.0)) throw ConfigError("mixture: cv and T0 must be positive");
}

std::vector<Quantity> MixtureModel::quantities(int n) const {
  std::vector<Quantity> q;
  for (int i = 0; i < species_; ++i) q.push_back({"n" + std::to_string(i + 1), n});
  q.push_back({"s", n});
  return q;
}

ModelDuals MixtureModel::duals(const SystemState& state) const {
  const auto& mesh = state.mesh_ptr();
  ModelDuals d;
  d.u = VectorField(mesh);
  d.rho = Field::Zero(mesh->node_count());
  for (int i = 0; i < species_; ++i) {
    const Field& ni = state.forms[static_cast<std::size_t>(i)][0];
    require_positive(ni, "species " + std::to_string(i + 1) + " density");
    d.rho += ni;
    d.b.push_back(scalar(mesh, -theta_ * (ni.log() + 1.0)));
  }
  const Field T = T0_ * (state.forms[static_cast<std::size_t>(species_)][0] / cv_).exp();
  require_positive(T, "temperature");
  d.b.push_back(scalar(mesh, -T));
  d.T = scalar(mesh, T);
  if (species_ == 0) d.rho.setOnes();
  return d;
}

Field MixtureModel::energy_density(const SystemState& state) const {
  Field e = cv_ * T0_ * (state.forms[static_cast<std::size_t>(species_)][0] / cv_).exp();
  for (int i = 0; i < species_; ++i) {
    const Field& ni = state.forms[static_cast<std::size_t>(i)][0];
    e += theta_ * ni * ni.log();
  }
  return e;
}

DualFields dual_fields(const FluidState& state, const EquationOfState& eos, double mu0) {
  const auto& mesh = state.mesh_ptr();
  const auto& M = eos.params();
  const auto th = eos.evaluate(state.nu1[0], state.nu2[0], state.s[0]);
  Field u2 = Field::Zero(th.rho.size());
  for (int i = 0; i < state.m.dim(); ++i) u2 += (state.m[i] / th.rho).square();
  DualFields d;
  d.T = scalar(mesh, th.T);
  d.mu_tilde1 = scalar(mesh, th.mu1 - 0.5 * u2 * M.M1);
  d.mu_tilde2 = scalar(mesh, th.mu2 - 0.5 * u2 * M.M2);
  d.mu = scalar(mesh, d.mu_tilde1[0] / M.M1 - d.mu_tilde2[0] / M.M2);
  VectorField H = magnetic_field(state.beta);
  for (int i = 0; i < H.dim(); ++i) H[i] /= mu0;
  d.H_form = flat(H);
  d.m = state.m;
  d.p = scalar(mesh, th.p);
  return d;
}

}  // namespace dforms
