#include "oim/self_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oim/dynamics.hpp"
#include "oim/enumeration.hpp"
#include "oim/random.hpp"
#include "oim/stability.hpp"
#include "oim/symmetric_eigen.hpp"

namespace oim {

namespace {

std::string describe(double worst, double tol) {
  std::ostringstream s;
  s << "worst error " << worst << " (tolerance " << tol << ")";
  return s.str();
}

double energy_at(const CouplingMatrix& w, const OimParams& p, std::vector<double> theta) {
  return lyapunov_energy(w, p, PhaseState(std::move(theta)));
}

CheckResult check_gradient(const CouplingMatrix& w, Rng& rng) {
  constexpr double step = 1e-5, tol = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const OimParams p{0.5 + rng.uniform(), 2.0 * rng.uniform(), 0.0};
    const auto th = random_phases(w.size(), rng);
    const auto f = phase_velocity(w, p, th);
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto plus = std::vector<double>(th.values().begin(), th.values().end());
      auto minus = plus;
      plus[i] += step;
      minus[i] -= step;
      const double grad = (energy_at(w, p, plus) - energy_at(w, p, minus)) / (2 * step);
      worst = std::max(worst, std::abs(f[i] + 0.5 * grad) / std::max(1.0, std::abs(f[i])));
    }
  }
  return {"gradient", worst <= tol, describe(worst, tol)};
}

CheckResult check_hessian(const CouplingMatrix& w, Rng& rng) {
  constexpr double step = 1e-4, tol = 1e-5;
  double worst = 0.0;
  const auto n = w.size();
  for (int trial = 0; trial < 3; ++trial) {
    const OimParams p{0.5 + rng.uniform(), 2.0 * rng.uniform(), 0.0};
    const auto th = random_phases(n, rng);
    const auto j = jacobian(w, p, th);
    double scale = 1.0;
    for (double x : j.data()) scale = std::max(scale, std::abs(x));
    const std::vector<double> base(th.values().begin(), th.values().end());
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        auto eval = [&](double da, double db) {
          auto x = base;
          x[a] += da;
          x[b] += db;
          return energy_at(w, p, std::move(x));
        };
        const double hess = (eval(step, step) - eval(step, -step) - eval(-step, step) +
                             eval(-step, -step)) /
                            (4 * step * step);
        worst = std::max(worst, std::abs(j(a, b) + 0.5 * hess) / scale);
      }
    }
  }
  return {"hessian", worst <= tol, describe(worst, tol)};
}

CheckResult check_spectral_shift(const CouplingMatrix& w, Rng& rng) {
  constexpr double tol = 1e-9;
  double worst = 0.0;
  double worst_rowsum = 0.0;
  const auto n = w.size();
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<int> spins(n);
    for (int& s : spins) s = rng.uniform() < 0.5 ? 1 : -1;
    const SpinConfig s(std::move(spins));
    const auto base = base_spectrum(w, s);
    for (double k : {0.5, 1.0, 2.0}) {
      for (double ks : {0.0, 0.3, 1.7}) {
        const auto j = jacobian_binarized(w, OimParams{k, ks, 0.0}, s);
        const auto direct = symmetric_eigenvalues(j);
        const auto shifted = base.shifted(k, ks);
        double norm = 0.0;
        for (double x : j.data()) norm += x * x;
        norm = std::max(1.0, std::sqrt(norm));
        for (std::size_t i = 0; i < n; ++i)
          worst = std::max(worst, std::abs(direct[i] - shifted[i]) / norm);
        for (std::size_t i = 0; i < n; ++i) {
          double sum = 0.0;
          for (double x : j.row(i)) sum += x;
          worst_rowsum = std::max(worst_rowsum, std::abs(sum + 2.0 * ks));
        }
      }
    }
  }
  const bool ok = worst <= tol && worst_rowsum <= 1e-12 * std::max<double>(1.0, n);
  return {"spectral-shift", ok,
          describe(worst, tol) + ", row-sum error " + std::to_string(worst_rowsum)};
}

CheckResult check_dissipation(const CouplingMatrix& w, Rng& rng) {
  SimConfig sim;
  sim.t_max = 20.0;
  sim.record_stride = 1;
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 3; ++trial) {
    const OimParams p{1.0, 0.2 + rng.uniform(), 0.0};
    const auto traj = integrate(w, p, random_phases(w.size(), rng), sim, nullptr);
    const auto report = energy_trace(traj);
    worst = std::max(worst, report.max_increase);
    ok = ok && report.pass;
  }
  return {"dissipation", ok, "max energy increase " + std::to_string(worst)};
}

}  // namespace

std::vector<CheckResult> run_self_checks(const CouplingMatrix& w, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> results;
  if (w.size() <= 16) {
    const bool ok = verify_enumeration(w);
    results.push_back({"enumeration", ok, ok ? "incremental energies match" : "mismatch"});
  } else {
    results.push_back({"enumeration", true, "skipped (n > 16)"});
  }
  results.push_back(check_gradient(w, rng));
  results.push_back(check_hessian(w, rng));
  results.push_back(check_spectral_shift(w, rng));
  results.push_back(check_dissipation(w, rng));
  return results;
}

}  // namespace oim
