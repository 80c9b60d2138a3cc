#include "dforms/cli/scenario.hpp"

#include "dforms/core/error.hpp"

#include <toml.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dforms {

MeshPtr MeshConfig::build() const {
  std::vector<double> spacing;
  for (int i = 0; i < dim; ++i) spacing.push_back(length[static_cast<std::size_t>(i)] / cells[static_cast<std::size_t>(i)]);
  return std::make_shared<const GridMesh>(cells, spacing, periodic);
}

namespace {

// Read access to a TOML table that records every key it hands out, so that
// unconsumed keys can be reported afterwards.
class Reader {
 public:
  Reader(const toml::table* table, std::string path, std::set<std::string>* consumed)
      : table_(table), path_(std::move(path)), consumed_(consumed) {}

  bool has(const std::string& key) const { return table_ && table_->contains(key); }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  Reader sub(const std::string& key) const {
    const toml::node* n = node(key);
    if (n && !n->is_table()) throw ConfigError(path(key) + ": expected a table");
    return Reader(n ? n->as_table() : nullptr, path(key), consumed_);
  }

  std::vector<Reader> array_of_tables(const std::string& key) const {
    std::vector<Reader> out;
    const toml::node* n = node(key);
    if (!n) return out;
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(path(key) + ": expected an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* t = arr->get(i)->as_table();
      if (!t) throw ConfigError(path(key) + "[" + std::to_string(i) + "]: expected a table");
      out.emplace_back(t, path(key) + "[" + std::to_string(i) + "]", consumed_);
    }
    return out;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const toml::node* n = node(key);
    if (!n) return required(key, fallback);
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) return *v;
    throw ConfigError(path(key) + ": expected a number");
  }

  long integer(const std::string& key, std::optional<long> fallback = std::nullopt) const {
    const toml::node* n = node(key);
    if (!n) return required(key, fallback);
    if (auto v = n->value_exact<int64_t>()) return static_cast<long>(*v);
    throw ConfigError(path(key) + ": expected an integer");
  }

  bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) const {
    const toml::node* n = node(key);
    if (!n) return required(key, fallback);
    if (auto v = n->value_exact<bool>()) return *v;
    throw ConfigError(path(key) + ": expected true or false");
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    const toml::node* n = node(key);
    if (!n) return required(key, fallback);
    if (auto v = n->value_exact<std::string>()) return *v;
    throw ConfigError(path(key) + ": expected a string");
  }

  std::vector<double> numbers(const std::string& key) const {
    const toml::node* n = node(key);
    if (!n) throw ConfigError(path(key) + ": required field is missing");
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(path(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* e = arr->get(i);
      auto v = e->value<double>();
      if (!v || !(e->is_floating_point() || e->is_integer())) {
        throw ConfigError(path(key) + "[" + std::to_string(i) + "]: expected a number");
      }
      out.push_back(*v);
    }
    return out;
  }

  /// Number or array of numbers, broadcast to `count` entries.
  std::vector<double> per_axis(const std::string& key, int count, std::optional<double> fallback = std::nullopt) const {
    const toml::node* n = node(key);
    if (!n) return std::vector<double>(static_cast<std::size_t>(count), required(key, fallback));
    if (n->is_array()) {
      auto v = numbers(key);
      if (static_cast<int>(v.size()) != count) {
        throw ConfigError(path(key) + ": expected " + std::to_string(count) + " entries, got " + std::to_string(v.size()));
      }
      return v;
    }
    return std::vector<double>(static_cast<std::size_t>(count), number(key));
  }

  /// Boolean or array of booleans, broadcast to `count` entries.
  std::vector<bool> per_axis_bool(const std::string& key, int count, bool fallback) const {
    const toml::node* n = node(key);
    if (!n) return std::vector<bool>(static_cast<std::size_t>(count), fallback);
    if (auto v = n->value_exact<bool>()) return std::vector<bool>(static_cast<std::size_t>(count), *v);
    const auto* arr = n->as_array();
    if (!arr || static_cast<int>(arr->size()) != count) {
      throw ConfigError(path(key) + ": expected a boolean or " + std::to_string(count) + " booleans");
    }
    std::vector<bool> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto v = arr->get(i)->value_exact<bool>();
      if (!v) throw ConfigError(path(key) + "[" + std::to_string(i) + "]: expected true or false");
      out.push_back(*v);
    }
    return out;
  }

  std::vector<std::vector<double>> matrix(const std::string& key) const {
    const toml::node* n = node(key);
    if (!n) throw ConfigError(path(key) + ": required field is missing");
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(path(key) + ": expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* row = arr->get(i)->as_array();
      if (!row) throw ConfigError(path(key) + "[" + std::to_string(i) + "]: expected an array of numbers");
      std::vector<double> r;
      for (std::size_t j = 0; j < row->size(); ++j) {
        const auto* e = row->get(j);
        auto v = e->value<double>();
        if (!v || !(e->is_floating_point() || e->is_integer())) {
          throw ConfigError(path(key) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]: expected a number");
        }
        r.push_back(*v);
      }
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    if (table_)
      for (const auto& [k, v] : *table_) out.emplace_back(k.str());
    return out;
  }

 private:
  const toml::node* node(const std::string& key) const {
    if (!table_) return nullptr;
    const toml::node* n = table_->get(key);
    if (n) consumed_->insert(path(key));
    return n;
  }

  template <class T>
  T required(const std::string& key, const std::optional<T>& fallback) const {
    if (!fallback) throw ConfigError(path(key) + ": required field is missing");
    return *fallback;
  }

  const toml::table* table_;
  std::string path_;
  std::set<std::string>* consumed_;
};

void collect_unconsumed(const toml::table& t, const std::string& prefix, const std::set<std::string>& consumed,
                        std::vector<std::string>& out) {
  for (const auto& [k, v] : t) {
    const std::string p = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
    if (const auto* sub = v.as_table()) {
      if (!consumed.count(p)) {
        out.push_back(p);
        continue;
      }
      collect_unconsumed(*sub, p, consumed, out);
    } else if (const auto* arr = v.as_array(); arr && arr->is_array_of_tables() && !arr->empty()) {
      if (!consumed.count(p)) {
        out.push_back(p);
        continue;
      }
      for (std::size_t i = 0; i < arr->size(); ++i)
        collect_unconsumed(*arr->get(i)->as_table(), p + "[" + std::to_string(i) + "]", consumed, out);
    } else if (!consumed.count(p)) {
      out.push_back(p);
    }
  }
}

MeshConfig parse_mesh(const Reader& r, ParseMode mode) {
  MeshConfig m;
  m.dim = static_cast<int>(r.integer("dim"));
  if (m.dim != 2 && m.dim != 3) throw ConfigError(r.path("dim") + ": must be 2 or 3");
  if (mode == ParseMode::ClosureOnly && !r.has("cells")) return m;
  for (double c : r.per_axis("cells", m.dim)) {
    if (c != std::floor(c) || c < GridMesh::kMinCells) {
      throw ConfigError(r.path("cells") + ": every entry must be an integer >= " + std::to_string(GridMesh::kMinCells));
    }
    m.cells.push_back(static_cast<int>(c));
  }
  m.length = r.per_axis("length", m.dim, 1.0);
  for (double l : m.length)
    if (!(l > 0.0)) throw ConfigError(r.path("length") + ": lengths must be positive");
  m.periodic = r.per_axis_bool("periodic", m.dim, true);
  return m;
}

curie::Action parse_action(const Reader& r) {
  const auto s = r.string("action", "right");
  if (s == "right") return curie::Action::Right;
  if (s == "left") return curie::Action::Left;
  throw ConfigError(r.path("action") + ": expected \"right\" or \"left\"");
}

Parity parse_parity(const Reader& r) {
  const auto s = r.string("parity", "even");
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw ConfigError(r.path("parity") + ": expected \"even\" or \"odd\"");
}

ClosureConfig parse_closure(const Reader& r, const EosParameters& eos) {
  ClosureConfig c;
  ViscosityCoefficients visc;
  if (r.has("viscosity")) {
    const auto v = r.numbers("viscosity");
    if (v.size() != 3) throw ConfigError(r.path("viscosity") + ": expected [homothety, traceless, skew]");
    visc = {v[0], v[1], v[2]};
  }
  c.hook = r.string("hook", "none");
  if (c.hook != "none" && c.hook != "inverse_temperature") {
    throw ConfigError(r.path("hook") + ": expected \"none\" or \"inverse_temperature\"");
  }
  const auto preset = r.string("preset", "custom");
  if (preset == "mhd") {
    MhdCoefficients k;
    k.kappa_ss = r.number("kappa_ss", 0.0);
    k.kappa_sn = r.number("kappa_sn", 0.0);
    k.kappa_nn = r.number("kappa_nn", 0.0);
    k.kappa_Bs = r.number("kappa_Bs", 0.0);
    k.kappa_Bn = r.number("kappa_Bn", 0.0);
    k.kappa_BB = r.number("kappa_BB", 0.0);
    k.kappa_nu = r.number("kappa_nu", 0.0);
    k.viscosity = visc;
    c.spec = mhd_closure(k, eos.M1, eos.M2);
    return c;
  }
  if (preset != "custom") throw ConfigError(r.path("preset") + ": expected \"mhd\" or \"custom\"");

  std::vector<ProcessDescriptor> procs;
  for (const auto& p : r.array_of_tables("process")) {
    ProcessDescriptor d;
    d.name = p.string("name");
    const auto kind = p.string("kind", "continuous");
    if (kind == "continuous") {
      d.kind = AffinityKind::Continuous;
    } else if (kind == "discrete") {
      d.kind = AffinityKind::Discrete;
    } else {
      throw ConfigError(p.path("kind") + ": expected \"continuous\" or \"discrete\"");
    }
    d.degree = static_cast<int>(p.integer("degree"));
    d.action = parse_action(p);
    d.parity = parse_parity(p);
    if (p.has("lambdas")) d.lambdas = p.numbers("lambdas");
    procs.push_back(std::move(d));
  }
  if (procs.empty()) throw ConfigError(r.path("process") + ": a custom closure needs at least one process");
  const auto rows = r.matrix("kappa");
  const auto N = static_cast<Eigen::Index>(procs.size());
  if (static_cast<Eigen::Index>(rows.size()) != N) {
    throw ConfigError(r.path("kappa") + ": expected " + std::to_string(N) + " rows");
  }
  Eigen::MatrixXd K(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != N) {
      throw ConfigError(r.path("kappa") + "[" + std::to_string(i) + "]: expected " + std::to_string(N) + " entries");
    }
    for (Eigen::Index j = 0; j < N; ++j) K(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  c.spec = ClosureSpec(std::move(procs), K, visc);
  c.spec.set_molar_masses({eos.M1, eos.M2});
  return c;
}

EosParameters parse_eos(const Reader& r, double& mu0) {
  EosParameters e;
  e.c0 = r.number("c0", e.c0);
  e.cv = r.number("cv", e.cv);
  e.b1 = r.number("b1", e.b1);
  e.b2 = r.number("b2", e.b2);
  e.M1 = r.number("M1", e.M1);
  e.M2 = r.number("M2", e.M2);
  e.mixing = r.number("mixing", e.mixing);
  mu0 = r.number("mu0", 1.0);
  if (!(e.M1 > 0.0)) throw ConfigError(r.path("M1") + ": must be positive");
  if (!(e.M2 > 0.0)) throw ConfigError(r.path("M2") + ": must be positive");
  const double ratio = e.M1 / e.M2;
  if (std::abs(ratio - std::round(ratio)) > 1e-12 * ratio || std::round(ratio) < 1.0) {
    throw ConfigError(r.path("M1") + ": M1 / M2 must be a positive integer (reaction 1 <-> k x 2)");
  }
  if (!(mu0 > 0.0)) throw ConfigError(r.path("mu0") + ": must be positive");
  EquationOfState check(e);
  return e;
}

std::array<double, 3> vec3(const Reader& r, const std::string& key, int dim) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  if (!r.has(key)) return out;
  const auto v = r.per_axis(key, dim);
  for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
  return out;
}

void parse_initial(const Reader& r, int dim, Scenario& sc) {
  if (r.has("checkpoint")) {
    sc.checkpoint = r.string("checkpoint");
    return;
  }
  auto& p = sc.initial;
  p.name = r.string("profile", "random");
  if (p.name != "random" && p.name != "sine_field") {
    throw ConfigError(r.path("profile") + ": expected \"random\" or \"sine_field\"");
  }
  p.n1 = r.number("n1", p.n1);
  p.n2 = r.number("n2", p.n2);
  p.s = r.number("s", p.s);
  p.velocity = vec3(r, "velocity", dim);
  p.field = vec3(r, "field", dim);
  p.density_amplitude = r.number("density_amplitude", 0.0);
  p.entropy_amplitude = r.number("entropy_amplitude", 0.0);
  p.velocity_amplitude = r.number("velocity_amplitude", 0.0);
  p.potential_amplitude = r.number("potential_amplitude", 0.0);
  p.field_amplitude = r.number("field_amplitude", 0.0);
  p.modes = static_cast<int>(r.integer("modes", 2));
  if (p.modes < 1) throw ConfigError(r.path("modes") + ": must be at least 1");
  if (!(p.n1 > 0.0) || !(p.n2 > 0.0)) throw ConfigError(r.path("n1") + ": densities must be positive");
}

RunConfig parse_run(const Reader& r) {
  RunConfig c;
  c.dt = r.number("dt");
  c.t_end = r.number("t_end");
  if (!(c.dt > 0.0)) throw ConfigError(r.path("dt") + ": must be positive");
  if (!(c.t_end >= 0.0)) throw ConfigError(r.path("t_end") + ": must be nonnegative");
  try {
    c.scheme = parse_scheme(r.string("scheme", "rk4"));
  } catch (const ConfigError& e) {
    throw ConfigError(r.path("scheme") + ": " + e.what());
  }
  c.report_interval = r.number("report_interval", 0.0);
  c.checkpoint_interval = r.number("checkpoint_interval", 0.0);
  if (c.report_interval < 0.0) throw ConfigError(r.path("report_interval") + ": must be nonnegative");
  if (c.checkpoint_interval < 0.0) throw ConfigError(r.path("checkpoint_interval") + ": must be nonnegative");
  const long seed = r.integer("seed", 1);
  if (seed < 0) throw ConfigError(r.path("seed") + ": must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.evolve_momentum = r.boolean("evolve_momentum", true);
  return c;
}

std::vector<BoundaryCondition> parse_bc(const Reader& r, const ClosureSpec& spec) {
  std::vector<BoundaryCondition> bcs(static_cast<std::size_t>(spec.size()));
  for (const auto& key : r.keys()) {
    const int a = spec.index_of(key);
    if (a < 0) throw ConfigError(r.path(key) + ": no closure process of that name");
    const auto b = r.sub(key);
    BoundaryCondition bc;
    try {
      bc.kind = parse_boundary_kind(b.string("kind", "homogeneous"));
    } catch (const BoundaryError& e) {
      throw ConfigError(b.path("kind") + ": " + e.what());
    }
    if (b.has("value")) bc.value = b.numbers("value");
    bcs[static_cast<std::size_t>(a)] = bc;
  }
  return bcs;
}

DiagnosticsConfig parse_diagnostics(const Reader& r, const MeshConfig& mesh) {
  DiagnosticsConfig d;
  if (r.has("surface")) {
    const auto s = r.sub("surface");
    FluxSurface f;
    f.normal_axis = static_cast<int>(s.integer("normal_axis"));
    f.index = static_cast<int>(s.integer("index"));
    if (f.normal_axis < 0 || f.normal_axis >= mesh.dim) throw ConfigError(s.path("normal_axis") + ": out of range");
    if (s.boolean("full", false)) {
      for (int b = 0; b < mesh.dim; ++b) {
        f.lo[static_cast<std::size_t>(b)] = 0;
        f.hi[static_cast<std::size_t>(b)] =
            mesh.cells[static_cast<std::size_t>(b)] - (mesh.periodic[static_cast<std::size_t>(b)] ? 1 : 0);
      }
    } else {
      const auto lo = s.per_axis("lo", mesh.dim);
      const auto hi = s.per_axis("hi", mesh.dim);
      for (int b = 0; b < mesh.dim; ++b) {
        f.lo[static_cast<std::size_t>(b)] = static_cast<int>(lo[static_cast<std::size_t>(b)]);
        f.hi[static_cast<std::size_t>(b)] = static_cast<int>(hi[static_cast<std::size_t>(b)]);
      }
    }
    d.surface = f;
  }
  static const std::set<std::string> known = {"energy_drift", "mass_drift",  "divB",
                                              "production",   "mu_monotone", "flux_balance"};
  const auto tol = r.sub("tolerances");
  for (const auto& key : tol.keys()) {
    if (!known.count(key)) throw ConfigError(tol.path(key) + ": unknown tolerance");
    d.tolerances[key] = tol.number(key);
  }
  return d;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name, ParseMode mode) {
  toml::table root;
  try {
    root = toml::parse(text, name);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ConfigError(os.str());
  }
  std::set<std::string> consumed;
  const Reader top(&root, "", &consumed);

  std::vector<std::string> missing;
  const std::vector<std::string> required =
      mode == ParseMode::Full ? std::vector<std::string>{"schema", "mesh", "closure", "initial", "run"}
                              : std::vector<std::string>{"schema", "mesh", "closure"};
  for (const auto& k : required)
    if (!top.has(k)) missing.push_back(k);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError("missing required blocks: " + list);
  }
  const long schema = top.integer("schema");
  if (schema != kSchemaVersion) {
    throw ConfigError("schema: unsupported version " + std::to_string(schema) + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }

  Scenario sc;
  sc.name = name;
  sc.mesh = parse_mesh(top.sub("mesh"), mode);
  sc.eos = parse_eos(top.sub("eos"), sc.mu0);
  sc.closure = parse_closure(top.sub("closure"), sc.eos);
  if (top.has("initial")) parse_initial(top.sub("initial"), sc.mesh.dim, sc);
  if (top.has("run")) sc.run = parse_run(top.sub("run"));
  if (top.has("bc")) sc.bcs = parse_bc(top.sub("bc"), sc.closure.spec);
  if (top.has("diagnostics")) {
    if (sc.mesh.cells.empty()) throw ConfigError("diagnostics: needs mesh.cells");
    sc.diagnostics = parse_diagnostics(top.sub("diagnostics"), sc.mesh);
  }
  sc.initial.seed = sc.run.seed;

  std::vector<std::string> unknown;
  collect_unconsumed(root, "", consumed, unknown);
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw ConfigError("unknown keys: " + list);
  }
  return sc;
}

Scenario load_scenario(const std::string& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  auto sc = parse_scenario(ss.str(), path, mode);
  sc.name = std::filesystem::path(path).stem().string();
  return sc;
}

ClosureSpec build_closure(const Scenario& sc) {
  ClosureSpec spec = sc.closure.spec;
  if (sc.closure.hook == "inverse_temperature") {
    spec.set_coefficient_hook([](const Field& T, const Field&) { return Field(1.0 / T); });
  }
  spec.validate(sc.mesh.dim);
  return spec;
}

}  // namespace dforms
