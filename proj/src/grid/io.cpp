#include "dforms/grid/io.hpp"

#include "dforms/core/error.hpp"
#include "dforms/grid/multi_index.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace dforms {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("truncated form record");
  return to_little(v);
}

}  // namespace

void write_form(std::ostream& os, const DiscreteForm& a) {
  const auto& mesh = a.mesh();
  os.write("DFRM", 4);
  put<std::int32_t>(os, mesh.dim());
  put<std::int32_t>(os, a.degree());
  for (int i = 0; i < mesh.dim(); ++i) put<std::int32_t>(os, mesh.cells(i));
  for (int i = 0; i < mesh.dim(); ++i) put<double>(os, mesh.spacing(i));
  for (int i = 0; i < mesh.dim(); ++i) put<std::uint8_t>(os, mesh.periodic(i) ? 1 : 0);
  for (const auto& c : a.components())
    for (Index j = 0; j < c.size(); ++j) put<double>(os, c[j]);
}

DiscreteForm read_form(std::istream& is, MeshPtr mesh) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "DFRM", 4) != 0) throw Error("not a form record");
  const int n = get<std::int32_t>(is);
  const int degree = get<std::int32_t>(is);
  if (n < 2 || n > 3) throw Error("form record has invalid dimension");
  std::vector<int> cells(n);
  std::vector<double> spacing(n);
  std::vector<bool> periodic(n);
  for (auto& c : cells) c = get<std::int32_t>(is);
  for (auto& h : spacing) h = get<double>(is);
  for (int i = 0; i < n; ++i) periodic[i] = get<std::uint8_t>(is) != 0;
  auto stored = std::make_shared<const GridMesh>(cells, spacing, periodic);
  if (mesh) {
    if (*mesh != *stored) throw MeshError("stored form lives on a different mesh");
  } else {
    mesh = stored;
  }
  std::vector<Field> comps(multi_index::binomial(n, degree), Field(mesh->node_count()));
  for (auto& c : comps)
    for (Index j = 0; j < c.size(); ++j) c[j] = get<double>(is);
  return DiscreteForm(mesh, degree, std::move(comps));
}

void save_form(const std::string& path, const DiscreteForm& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_form(os, a);
}

DiscreteForm load_form(const std::string& path, MeshPtr mesh) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  return read_form(is, std::move(mesh));
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_form_csv(std::ostream& os, const DiscreteForm& a) {
  const auto& mesh = a.mesh();
  const int n = mesh.dim();
  static const char* axes[] = {"i", "j", "k"};
  static const char* coords[] = {"x", "y", "z"};
  for (int i = 0; i < n; ++i) os << axes[i] << ',';
  for (int i = 0; i < n; ++i) os << coords[i] << ',';
  const auto& basis = multi_index::basis(n, a.degree());
  for (std::size_t p = 0; p < basis.size(); ++p) {
    os << 'c';
    for (int i = 0; i < n; ++i)
      if (basis[p] & (1u << i)) os << i;
    os << (p + 1 < basis.size() ? "," : "\n");
  }
  for (Index idx = 0; idx < mesh.node_count(); ++idx) {
    const auto ijk = mesh.unflatten(idx);
    const auto x = mesh.position(idx);
    for (int i = 0; i < n; ++i) os << ijk[i] << ',';
    for (int i = 0; i < n; ++i) os << format_double(x[i]) << ',';
    for (int c = 0; c < a.component_count(); ++c)
      os << format_double(a[c][idx]) << (c + 1 < a.component_count() ? "," : "\n");
  }
}

void save_checkpoint(const std::string& path, const NamedForms& forms) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write("DFCK", 4);
  put<std::int32_t>(os, static_cast<std::int32_t>(forms.size()));
  for (const auto& [name, form] : forms) {
    put<std::int32_t>(os, static_cast<std::int32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_form(os, form);
  }
}

NamedForms load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "DFCK", 4) != 0) throw Error(path + " is not a checkpoint");
  const int count = get<std::int32_t>(is);
  NamedForms out;
  MeshPtr mesh;
  for (int i = 0; i < count; ++i) {
    const int len = get<std::int32_t>(is);
    std::string name(static_cast<std::size_t>(len), '\0');
    is.read(name.data(), len);
    DiscreteForm f = read_form(is, mesh);
    mesh = f.mesh_ptr();
    out.emplace_back(std::move(name), std::move(f));
  }
  return out;
}

}  // namespace dforms
