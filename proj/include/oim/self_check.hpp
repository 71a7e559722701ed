#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oim/model.hpp"

namespace oim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Numerical self-checks behind `oimctl verify`: Gray-code vs naive
/// enumeration (n <= 16), finite-difference gradient and Hessian of E,
/// the spectral-shift law at binarized states, and energy dissipation
/// along a deterministic trajectory.
std::vector<CheckResult> run_self_checks(const CouplingMatrix& w, std::uint64_t seed);

}  // namespace oim
