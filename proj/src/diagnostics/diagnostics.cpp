#include "dforms/diagnostics/diagnostics.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/io.hpp"
#include "dforms/grid/multi_index.hpp"
#include "dforms/grid/operators.hpp"

#include <cmath>
#include <limits>

namespace dforms {

namespace mi = multi_index;

double total_energy(const AdvectedSystem& system, const SystemState& state) { return system.energy(state); }

double total_energy(const FluidState& state, const EquationOfState& eos, double mu0) {
  return integrate(state.mesh(), MhdModel(eos, mu0).energy_density(state.to_system()));
}

double total_mass(const FluidState& state, double M1, double M2) {
  return integrate(state.mesh(), state.rho(M1, M2));
}

EntropyBudget entropy_budget(const SystemState& state, int entropy_index) {
  EntropyBudget b;
  b.total = integrate(state.forms.at(static_cast<std::size_t>(entropy_index)));
  b.produced = integrate(state.produced);
  b.exchanged = b.total - b.produced;
  return b;
}

double divB_norm(const DiscreteForm& beta) { return exterior_derivative(beta).max_abs(); }

DiscreteForm energy_flux(const AdvectedSystem& system, const SystemState& state, const Evaluation& ev) {
  const auto& mesh_ptr = state.mesh_ptr();
  const int n = mesh_ptr->dim();
  const auto& u = ev.duals.u;
  DiscreteForm G(mesh_ptr, n - 1);

  Field um = Field::Zero(mesh_ptr->node_count());
  for (int i = 0; i < n; ++i) um += u[i] * state.m[i];
  const DiscreteForm vol = volume_form(mesh_ptr, Field::Ones(mesh_ptr->node_count()));
  G -= interior_product(u, volume_form(mesh_ptr, um));

  for (std::size_t q = 0; q < state.forms.size(); ++q) {
    const int k = state.forms[q].degree();
    if (k == 0) continue;
    const double sign = (n - k) % 2 == 0 ? 1.0 : -1.0;
    G.add_scaled(wedge(ev.duals.b[q], interior_product(u, state.forms[q])), sign);
  }

  const auto& procs = system.closure().processes();
  for (int a = 0; a < system.closure().size(); ++a) {
    if (procs[static_cast<std::size_t>(a)].kind != AffinityKind::Continuous) continue;
    const auto& qs = system.bindings()[static_cast<std::size_t>(a)].quantities;
    const auto lam = system.lambdas(a);
    DiscreteForm c(mesh_ptr, ev.duals.b[static_cast<std::size_t>(qs[0])].degree());
    for (std::size_t i = 0; i < lam.size(); ++i) c.add_scaled(ev.duals.b[static_cast<std::size_t>(qs[i])], lam[i]);
    G += wedge(c, ev.fluxes[static_cast<std::size_t>(a)]);
  }

  if (system.options().evolve_momentum) {
    VectorField w(mesh_ptr);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) w[j] += u[i] * ev.sigma(i, j);
    G += interior_product(w, vol);
  }
  return G;
}

DiscreteForm local_energy_residual(const AdvectedSystem& system, const SystemState& state) {
  if (!state.mesh().fully_periodic()) {
    throw BoundaryError("local energy residual is only supported on periodic meshes");
  }
  const auto& mesh_ptr = state.mesh_ptr();
  const int n = mesh_ptr->dim();
  const auto ev = system.evaluate(state);
  Field rate = Field::Zero(mesh_ptr->node_count());
  for (int i = 0; i < n; ++i) rate += ev.duals.u[i] * ev.tangent.m[i];
  for (std::size_t q = 0; q < state.forms.size(); ++q) rate -= wedge(ev.duals.b[q], ev.tangent.forms[q])[0];
  return volume_form(mesh_ptr, rate) - exterior_derivative(energy_flux(system, state, ev));
}

double l2_norm(const DiscreteForm& top) { return std::sqrt(integrate(top.mesh(), volume_coefficient(top).square())); }

// --- flux surfaces -----------------------------------------------------------

FluxSurface full_cross_section(const GridMesh& mesh, int normal_axis, int index) {
  FluxSurface s;
  s.normal_axis = normal_axis;
  s.index = index;
  for (int b = 0; b < mesh.dim(); ++b) {
    s.lo[b] = 0;
    s.hi[b] = mesh.nodes(b) - 1;
  }
  return s;
}

namespace {

std::vector<int> span_axes(int n, int normal) {
  std::vector<int> axes;
  for (int b = 0; b < n; ++b)
    if (b != normal) axes.push_back(b);
  return axes;
}

void check_surface(const GridMesh& mesh, const FluxSurface& s) {
  const int n = mesh.dim();
  if (s.normal_axis < 0 || s.normal_axis >= n) throw BoundaryError("flux surface normal axis outside the mesh");
  if (s.index < 0 || s.index >= mesh.nodes(s.normal_axis)) throw BoundaryError("flux surface layer outside the mesh");
  for (int b : span_axes(n, s.normal_axis)) {
    const int lo = s.lo[b], hi = s.hi[b];
    if (lo > hi || lo < 0 || hi >= mesh.nodes(b)) throw BoundaryError("flux surface outside the mesh");
    if (!mesh.periodic(b) && (lo < 1 || hi > mesh.nodes(b) - 2)) {
      throw BoundaryError("flux surface must stay off the boundary layer of bounded axis " + std::to_string(b));
    }
    if (mesh.periodic(b) && !(lo == 0 && hi == mesh.nodes(b) - 1) && hi - lo + 1 >= mesh.nodes(b) - 1) {
      throw BoundaryError("partial periodic flux surface must leave a gap of two nodes");
    }
  }
}

int wrap(const GridMesh& mesh, int axis, int i) {
  const int N = mesh.nodes(axis);
  return ((i % N) + N) % N;
}

// Visits node indices of the block spanned by `axes` with ranges lo..hi, the
// remaining coordinates fixed by `base`.
template <class Visit>
void for_each_block_node(const GridMesh& mesh, const std::vector<int>& axes, const std::array<int, 3>& lo,
                         const std::array<int, 3>& hi, std::array<int, 3> base, Visit&& visit) {
  if (axes.empty()) {
    visit(base);
    return;
  }
  const int a = axes.front();
  const std::vector<int> rest(axes.begin() + 1, axes.end());
  for (int i = lo[a]; i <= hi[a]; ++i) {
    base[a] = i;
    for_each_block_node(mesh, rest, lo, hi, base, visit);
  }
}

}  // namespace

double surface_flux(const DiscreteForm& beta, const FluxSurface& s) {
  const auto& mesh = beta.mesh();
  const int n = mesh.dim();
  if (beta.degree() != n - 1) throw DegreeError("surface flux expects an (n-1)-form");
  check_surface(mesh, s);
  const auto axes = span_axes(n, s.normal_axis);
  const Field& comp = beta.by_mask(mi::full_mask(n) & ~(1u << s.normal_axis));
  double area = 1.0;
  for (int b : axes) area *= mesh.spacing(b);
  std::array<int, 3> base{0, 0, 0};
  base[s.normal_axis] = s.index;
  double total = 0.0;
  for_each_block_node(mesh, axes, s.lo, s.hi, base, [&](const std::array<int, 3>& ijk) {
    total += comp[mesh.flatten(ijk)];
  });
  return total * area;
}

double boundary_circulation(const DiscreteForm& j, const FluxSurface& s) {
  const auto& mesh = j.mesh();
  const int n = mesh.dim();
  if (j.degree() != n - 2) throw DegreeError("boundary circulation expects an (n-2)-form");
  check_surface(mesh, s);
  const auto axes = span_axes(n, s.normal_axis);
  const unsigned S = mi::full_mask(n) & ~(1u << s.normal_axis);
  double total = 0.0;
  for (int b : axes) {
    const unsigned rest = S & ~(1u << b);
    const int sign = mi::insert_sign(b, rest);
    const Field& f = j.by_mask(rest);
    std::vector<int> others;
    double len = 1.0;
    for (int c : axes) {
      if (c == b) continue;
      others.push_back(c);
      len *= mesh.spacing(c);
    }
    std::array<int, 3> base{0, 0, 0};
    base[s.normal_axis] = s.index;
    double edge = 0.0;
    for_each_block_node(mesh, others, s.lo, s.hi, base, [&](std::array<int, 3> ijk) {
      auto value = [&](int i) {
        ijk[b] = wrap(mesh, b, i);
        return f[mesh.flatten(ijk)];
      };
      edge += 0.5 * (value(s.hi[b]) + value(s.hi[b] + 1)) - 0.5 * (value(s.lo[b]) + value(s.lo[b] - 1));
    });
    total += sign * edge * len;
  }
  return total;
}

FluxBalanceReport alfven_flux_check(const std::vector<FluxSample>& h) {
  if (h.size() < 5) throw Error("flux balance needs at least 5 samples");
  const double dt = h[1].time - h[0].time;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (std::abs((h[k].time - h[k - 1].time) - dt) > 1e-9 * std::abs(dt)) {
      throw Error("flux balance needs uniformly spaced samples");
    }
  }
  FluxBalanceReport r;
  double circ_max = 0.0;
  for (std::size_t k = 2; k + 2 < h.size(); ++k) {
    const double rate =
        (-h[k + 2].flux + 8.0 * h[k + 1].flux - 8.0 * h[k - 1].flux + h[k - 2].flux) / (12.0 * dt);
    r.time.push_back(h[k].time);
    r.flux_rate.push_back(rate);
    r.circulation.push_back(h[k].circulation);
    r.max_residual = std::max(r.max_residual, std::abs(rate - h[k].circulation));
    circ_max = std::max(circ_max, std::abs(h[k].circulation));
  }
  r.relative_residual = circ_max > 0.0 ? r.max_residual / circ_max : r.max_residual;
  for (const auto& s : h) r.flux_drift = std::max(r.flux_drift, std::abs(s.flux - h[0].flux));
  return r;
}

std::vector<SpeciesInvariant> species_invariants(const std::vector<double>& times,
                                                 const std::vector<std::vector<double>>& totals,
                                                 const std::vector<std::vector<double>>& coefficients,
                                                 const std::vector<double>& lambdas) {
  if (times.size() != totals.size() || times.size() < 2) throw Error("species history needs matching times");
  const std::size_t N = lambdas.size();
  for (const auto& t : totals)
    if (t.size() != N) throw Error("species totals do not match the process lambdas");
  std::vector<SpeciesInvariant> out;
  const double elapsed = times.back() - times.front();
  for (const auto& mu : coefficients) {
    if (mu.size() != N) throw Error("invariant coefficients do not match the process lambdas");
    SpeciesInvariant inv;
    inv.coefficients = mu;
    double annihilation = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      annihilation += mu[i] * lambdas[i];
      scale += std::abs(mu[i] * lambdas[i]);
    }
    inv.annihilates = std::abs(annihilation) <= 1e-12 * scale;
    auto value = [&](const std::vector<double>& t) {
      double v = 0.0;
      for (std::size_t i = 0; i < N; ++i) v += mu[i] * t[i];
      return v;
    };
    inv.initial = value(totals.front());
    inv.final = value(totals.back());
    double drift = 0.0;
    for (const auto& t : totals) drift = std::max(drift, std::abs(value(t) - inv.initial));
    inv.drift_per_time = elapsed > 0.0 ? drift / elapsed : drift;
    out.push_back(std::move(inv));
  }
  return out;
}

DiagnosticsReport diagnose(const AdvectedSystem& mhd, const SystemState& state, double time, long step,
                           const std::optional<FluxSurface>& surface) {
  const auto* model = dynamic_cast<const MhdModel*>(&mhd.model());
  if (!model) throw Error("diagnose expects an MHD system");
  const auto fs = FluidState::from_system(state);
  const auto& M = model->eos().params();
  const auto ev = mhd.evaluate(state);

  DiagnosticsReport r;
  r.time = time;
  r.step = step;
  r.energy = mhd.energy(state);
  r.mass = total_mass(fs, M.M1, M.M2);
  const auto budget = entropy_budget(state, model->entropy_index());
  r.entropy_total = budget.total;
  r.entropy_produced = budget.produced;
  r.entropy_exchanged = budget.exchanged;
  r.production_rate = integrate(ev.production);
  r.divB = divB_norm(fs.beta);
  r.mu_max = dual_fields(fs, model->eos(), model->mu0()).mu.max_abs();
  if (surface) {
    r.flux = surface_flux(fs.beta, *surface);
    const int res = mhd.closure().index_of("resistive");
    r.circulation = res >= 0 ? boundary_circulation(ev.fluxes[static_cast<std::size_t>(res)], *surface) : 0.0;
  }
  r.local_energy_residual = state.mesh().fully_periodic() ? l2_norm(local_energy_residual(mhd, state))
                                                          : std::numeric_limits<double>::quiet_NaN();
  return r;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "time",     "step",        "energy",         "mass", "entropy_total", "entropy_produced", "entropy_exchanged",
      "production_rate", "flux", "circulation", "local_energy_residual", "divB", "mu_max"};
  return cols;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : report_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string csv_row(const DiagnosticsReport& r) {
  std::string out = format_double(r.time) + "," + std::to_string(r.step);
  for (double v : {r.energy, r.mass, r.entropy_total, r.entropy_produced, r.entropy_exchanged, r.production_rate,
                   r.flux, r.circulation, r.local_energy_residual, r.divB, r.mu_max}) {
    out += "," + format_double(v);
  }
  return out;
}

}  // namespace dforms
