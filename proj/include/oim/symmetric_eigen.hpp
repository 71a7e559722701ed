#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oim/matrix.hpp"

namespace oim {

/// Cyclic Jacobi eigensolver for dense real symmetric matrices.
///
/// The input is symmetrized by averaging, then rotated until the
/// off-diagonal Frobenius norm drops to 1e-12 * ||A||_F. Gives up with a
/// NumericalError after 64 sweeps. Reusable: the workspace is kept between
/// calls so hot loops do not allocate.
class JacobiEigenSolver {
 public:
  static constexpr double kRelativeTolerance = 1e-12;
  static constexpr int kMaxSweeps = 64;
  /// Largest |A_ij - A_ji| accepted, relative to max(1, ||A||_F).
  static constexpr double kSymmetryTolerance = 1e-10;

  /// Eigenvalues in descending order.
  std::span<const double> compute(const SquareMatrix& a);

  int last_sweeps() const noexcept { return sweeps_; }

 private:
  std::vector<double> work_;
  std::vector<double> values_;
  int sweeps_ = 0;
};

/// Convenience wrapper returning all eigenvalues, descending.
std::vector<double> symmetric_eigenvalues(const SquareMatrix& a);

}  // namespace oim
