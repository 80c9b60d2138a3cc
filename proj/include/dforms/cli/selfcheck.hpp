#pragma once

#include "dforms/grid/fields.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dforms {

struct SelfcheckOptions {
  int cells = 8;
  std::uint64_t seed = 7;
  /// Hodge star under test; replaceable to confirm the suite detects faults.
  std::function<DiscreteForm(const DiscreteForm&)> hodge;
};

struct SelfcheckResult {
  std::string suite;
  std::string check;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

std::vector<SelfcheckResult> run_selfcheck(const SelfcheckOptions& options = {});

/// Fixed-width table, one row per check, then an overall line.
void print_selfcheck(std::ostream& os, const std::vector<SelfcheckResult>& results);

bool all_passed(const std::vector<SelfcheckResult>& results);

}  // namespace dforms
