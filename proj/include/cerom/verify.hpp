#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cerom/harness.hpp"

namespace cerom {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double value = 0.0;     // measured quantity
  double tolerance = 0.0; // bound it was compared against
  std::string detail;
};

/// Algebraic property checks on a prepared dataset: POD orthonormality,
/// eigenvalue ordering, trilinear identity (needs the mesh), projection
/// idempotence, least-squares optimality and synthetic operator recovery.
std::vector<CheckResult> run_property_suite(const Dataset &data, std::uint64_t seed);

bool all_passed(const std::vector<CheckResult> &checks);

} // namespace cerom
