#include "dforms/cli/selfcheck.hpp"

#include "dforms/core/error.hpp"
#include "dforms/curie/intertwiner.hpp"
#include "dforms/grid/operators.hpp"
#include "dforms/solver/advected_system.hpp"
#include "dforms/solver/initial_data.hpp"
#include "dforms/thermo/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace dforms {

namespace {

DiscreteForm random_form(const MeshPtr& mesh, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DiscreteForm a(mesh, degree);
  for (int c = 0; c < a.component_count(); ++c) {
    Field f(mesh->node_count());
    for (Index i = 0; i < f.size(); ++i) f[i] = dist(rng);
    a[c] = f;
  }
  return a;
}

VectorField random_vector(const MeshPtr& mesh, std::mt19937_64& rng) {
  VectorField v(mesh);
  const auto a = random_form(mesh, 1, rng);
  for (int i = 0; i < mesh->dim(); ++i) v[i] = a[i];
  return v;
}

class Collector {
 public:
  explicit Collector(std::vector<SelfcheckResult>& out) : out_(out) {}

  void add(const std::string& suite, const std::string& check, double value, double tol) {
    out_.push_back({suite, check, value, tol, std::isfinite(value) && value <= tol});
  }

  /// Runs `f`; an exception is recorded as a failure of that check.
  template <class F>
  void guard(const std::string& suite, const std::string& check, double tol, F&& f) {
    try {
      add(suite, check, f(), tol);
    } catch (const std::exception&) {
      out_.push_back({suite, check, std::nan(""), tol, false});
    }
  }

 private:
  std::vector<SelfcheckResult>& out_;
};

void grid_suite(Collector& c, const SelfcheckOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const auto hodge_op = opt.hodge ? opt.hodge : [](const DiscreteForm& a) { return hodge(a); };
  double dd = 0.0, star = 0.0, wedge_sq = 0.0, adj = 0.0;
  for (int n : {2, 3}) {
    const auto mesh = GridMesh::periodic_box(n, opt.cells, 2.0 * M_PI);
    for (int k = 0; k <= n; ++k) {
      const auto a = random_form(mesh, k, rng);
      if (k + 2 <= n) dd = std::max(dd, exterior_derivative(exterior_derivative(a)).max_abs() / a.max_abs());
      const double sign = (k * (n - k)) % 2 == 0 ? 1.0 : -1.0;
      star = std::max(star, (hodge_op(hodge_op(a)) - sign * a).max_abs() / a.max_abs());
      if (k % 2 == 1 && 2 * k <= n) wedge_sq = std::max(wedge_sq, wedge(a, a).max_abs());
      const auto b = random_form(mesh, n - k, rng);
      const auto v = random_vector(mesh, rng);
      const double lhs = pairing(diamond(b, a), v);
      const double rhs = -pairing(b, lie_derivative(v, a));
      adj = std::max(adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  c.add("grid", "d o d = 0", dd, 1e-12);
  c.add("grid", "hodge involution sign", star, 1e-12);
  c.add("grid", "a ^ a = 0 (odd degree)", wedge_sq, 1e-12);
  c.add("grid", "diamond adjoint of Lie derivative", adj, 1e-12);
}

void curie_suite(Collector& c, const SelfcheckOptions& opt) {
  const int n = 3;
  const auto samples = curie::sample_group(n, 100, true, opt.seed);
  c.guard("curie", "form Hom dimensions (n = 3)", 0.0, [&] {
    double mismatches = 0.0;
    for (const auto& e : curie::form_dimension_table(n, samples)) {
      const bool same = e.source.action == e.target.action;
      const int expected = (same ? e.target.degree == e.source.degree : e.target.degree == n - e.source.degree) ? 1 : 0;
      if (e.dimension != expected) mismatches += 1.0;
    }
    return mismatches;
  });
  c.guard("curie", "tensor commutant dimension - 3", 0.0, [&] {
    const auto space = curie::intertwiner_space(curie::FiberRep::tensor(n), curie::FiberRep::tensor(n), samples);
    return std::abs(space.dimension() - 3.0);
  });
}

void thermo_suite(Collector& c) {
  MhdCoefficients k;
  k.kappa_ss = 0.05;
  k.kappa_sn = 0.01;
  k.kappa_nn = 0.03;
  k.kappa_Bs = 0.02;
  k.kappa_Bn = -0.015;
  k.kappa_BB = 0.04;
  k.kappa_nu = 0.1;
  k.viscosity = {0.02, 0.03, 0.01};
  c.add("thermo", "default closure accepted", validate_onsager(mhd_closure(k, 2.0, 1.0), 3).passed ? 0.0 : 1.0, 0.0);

  // Symmetric coupling between parities violates the antisymmetry rule.
  auto bad = mhd_closure(k, 2.0, 1.0);
  Eigen::MatrixXd kappa = bad.kappa();
  kappa(0, 2) = kappa(2, 0);
  const ClosureSpec symmetric(bad.processes(), kappa, k.viscosity);
  c.add("thermo", "cross-parity symmetric coupling rejected", validate_onsager(symmetric, 3).passed ? 1.0 : 0.0,
        0.0);
}

void viscosity_suite(Collector& c, const SelfcheckOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  const auto mesh = GridMesh::periodic_box(3, opt.cells, 2.0 * M_PI);
  const auto grad = velocity_gradient(random_vector(mesh, rng));
  const auto sigma = viscous_stress(grad, {0.02, 0.03, 0.01});
  const Field p = contract(sigma, grad);
  c.add("thermo", "viscous production >= 0", std::max(0.0, -p.minCoeff()), 1e-14);
}

void solver_suite(Collector& c, const SelfcheckOptions& opt) {
  const int n = 3;
  const auto mesh = GridMesh::periodic_box(n, opt.cells, 1.0);
  InitialProfile prof;
  prof.velocity = {0.2, -0.1, 0.05};
  prof.field = {0.5, 0.2, -0.3};
  prof.density_amplitude = 0.1;
  prof.entropy_amplitude = 0.1;
  prof.velocity_amplitude = 0.2;
  prof.potential_amplitude = 0.05;
  prof.seed = opt.seed;
  const auto state = make_initial_state(mesh, prof, 2.0, 1.0).to_system();

  MhdCoefficients k;
  k.kappa_ss = 0.05;
  k.kappa_sn = 0.01;
  k.kappa_nn = 0.03;
  k.kappa_Bs = 0.02;
  k.kappa_Bn = -0.015;
  k.kappa_BB = 0.04;
  k.kappa_nu = 0.1;
  k.viscosity = {0.02, 0.03, 0.01};
  auto closure = mhd_closure(k, 2.0, 1.0);
  closure.validate(n);
  EosParameters ep;
  ep.mixing = 0.3;
  const auto system = make_mhd_system(EquationOfState(ep), 1.0, closure, n);
  const auto ev = system.evaluate(state);

  double rate = pairing(ev.tangent.m, ev.duals.u);
  double scale = std::abs(pairing(ev.tangent.m, ev.duals.u));
  for (std::size_t q = 0; q < state.forms.size(); ++q) {
    const double term = pairing(ev.duals.b[q], ev.tangent.forms[q]);
    rate -= term;
    scale = std::max(scale, std::abs(term));
  }
  c.add("solver", "semi-discrete energy rate", std::abs(rate) / scale, 1e-10);
  const DiscreteForm& beta_dot = ev.tangent.forms[2];
  c.add("solver", "d(dbeta/dt) = 0", exterior_derivative(beta_dot).max_abs() / beta_dot.max_abs(), 1e-12);
  const double production = integrate(ev.production);
  c.add("solver", "entropy production >= 0", std::max(0.0, -production), 1e-12);
  c.add("solver", "pointwise production >= 0", std::max(0.0, -volume_coefficient(ev.production).minCoeff()), 1e-12);
}

}  // namespace

std::vector<SelfcheckResult> run_selfcheck(const SelfcheckOptions& options) {
  std::vector<SelfcheckResult> out;
  Collector c(out);
  grid_suite(c, options);
  curie_suite(c, options);
  thermo_suite(c);
  viscosity_suite(c, options);
  solver_suite(c, options);
  return out;
}

bool all_passed(const std::vector<SelfcheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

void print_selfcheck(std::ostream& os, const std::vector<SelfcheckResult>& results) {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-42s %12s %10s  %s\n", "suite", "check", "value", "tol", "result");
  os << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-8s %-42s %12.3e %10.1e  %s\n", r.suite.c_str(), r.check.c_str(), r.value,
                  r.tolerance, r.passed ? "PASS" : "FAIL");
    os << line;
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  os << passed << "/" << results.size() << " checks passed\n";
}

}  // namespace dforms
