#include "oim/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "oim/errors.hpp"

namespace oim {

std::span<const double> JacobiEigenSolver::compute(const SquareMatrix& a) {
  const std::size_t n = a.size();
  work_.assign(n * n, 0.0);
  values_.resize(n);
  sweeps_ = 0;
  if (n == 0) return values_;

  double norm_sq = 0.0;
  for (double x : a.data()) {
    if (!std::isfinite(x)) throw NumericalError("matrix has non-finite entries");
    norm_sq += x * x;
  }
  const double norm = std::sqrt(norm_sq);
  const double sym_tol = kSymmetryTolerance * std::max(1.0, norm);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > sym_tol)
        throw NumericalError("matrix is not symmetric within tolerance");
      const double avg = 0.5 * (a(i, j) + a(j, i));
      work_[i * n + j] = avg;
      work_[j * n + i] = avg;
    }
  }

  auto at = [&](std::size_t i, std::size_t j) -> double& { return work_[i * n + j]; };
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += at(p, q) * at(p, q);
    return std::sqrt(2.0 * s);
  };

  const double target = kRelativeTolerance * norm;
  while (off_norm() > target) {
    if (sweeps_ == kMaxSweeps)
      throw NumericalError("Jacobi eigensolver did not converge in " +
                           std::to_string(kMaxSweeps) + " sweeps");
    ++sweeps_;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        // Symmetric Schur rotation zeroing A(p, q).
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = at(p, r) = c * arp - s * arq;
          at(r, q) = at(q, r) = s * arp + c * arq;
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) values_[i] = at(i, i);
  std::sort(values_.begin(), values_.end(), std::greater<>());
  return values_;
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& a) {
  JacobiEigenSolver solver;
  const auto v = solver.compute(a);
  return {v.begin(), v.end()};
}

}  // namespace oim
