#pragma once

#include "dforms/grid/fields.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dforms {

// Binary snapshot of one form, little-endian throughout:
//   char[4]  "DFRM"
//   int32    n, degree
//   int32    cells[n]
//   float64  spacing[n]
//   uint8    periodic[n]
//   float64  components, each a full node array in row-major order
void write_form(std::ostream& os, const DiscreteForm& a);

/// Reads one form record. If `mesh` is given the stored mesh must equal it and
/// the returned form shares it; otherwise a new mesh is created.
DiscreteForm read_form(std::istream& is, MeshPtr mesh = nullptr);

void save_form(const std::string& path, const DiscreteForm& a);
DiscreteForm load_form(const std::string& path, MeshPtr mesh = nullptr);

/// CSV with one row per node: index columns, coordinates, then one column per
/// component (header names the multi-index, e.g. `c01`).
void write_form_csv(std::ostream& os, const DiscreteForm& a);

/// Named collection of forms sharing one mesh ("DFCK" + count + named records).
using NamedForms = std::vector<std::pair<std::string, DiscreteForm>>;
void save_checkpoint(const std::string& path, const NamedForms& forms);
NamedForms load_checkpoint(const std::string& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace dforms
