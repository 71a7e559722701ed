#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "oim/enumeration.hpp"
#include "oim/matrix.hpp"
#include "oim/model.hpp"

namespace oim {

using JacobianMatrix = SquareMatrix;

/// |lambda_L| at or below this counts as marginal, and marginal is unstable.
inline constexpr double kMarginalTolerance = 1e-9;

inline bool is_stable(double lambda_l) noexcept { return lambda_l < -kMarginalTolerance; }

/// Analytic derivative of the phase dynamics:
///   J_ik = K W_ik cos(theta_i - theta_k)                          (k != i)
///   J_ii = -K sum_j W_ij cos(theta_i - theta_j) - 2 K_s cos(2 theta_i)
JacobianMatrix jacobian(const CouplingMatrix& w, const OimParams& p, const PhaseState& th);

/// Jacobian at the phase image of s, where cos(theta_i - theta_k) = s_i s_k.
JacobianMatrix jacobian_binarized(const CouplingMatrix& w, const OimParams& p,
                                  const SpinConfig& s);

/// Eigenvalues (descending) of the K = 1, K_s = 0 binarized Jacobian. The
/// spectrum at any (K, K_s) is {K beta_i - 2 K_s}.
struct BaseSpectrum {
  std::vector<double> beta;

  double top() const { return beta.front(); }
  std::vector<double> shifted(double k, double ks) const;
};

BaseSpectrum base_spectrum(const CouplingMatrix& w, const SpinConfig& s);

/// Largest Jacobian eigenvalue lambda_L = K beta_1 - 2 K_s.
double largest_lyapunov(const CouplingMatrix& w, const OimParams& p, const SpinConfig& s);

/// Injection strength K_s* = K beta_1 / 2 where lambda_L crosses zero.
double critical_ks(const CouplingMatrix& w, const SpinConfig& s, double k);

/// True iff ||phase_velocity||_inf <= tol.
bool is_equilibrium(const CouplingMatrix& w, const OimParams& p, const PhaseState& th,
                    double tol);

/// Per-representative output of the exhaustive eigensolve.
struct ConfigSpectrum {
  ConfigIndex index = 0;
  double h = 0.0;
  double beta_max = 0.0;
};

/// One eigensolve for every representative, ordered by index.
std::vector<ConfigSpectrum> landscape_spectra(const CouplingMatrix& w, unsigned threads = 1);

/// Same, for an explicit list of representatives (order preserved).
std::vector<ConfigSpectrum> config_spectra(const CouplingMatrix& w,
                                           const std::vector<ConfigIndex>& indices);

struct SweepRow {
  ConfigIndex config = 0;
  double h = 0.0;
  double ks = 0.0;
  double lambda_l = 0.0;
};

/// lambda_L for every (config, K_s); rows ordered by (config, K_s). When
/// `configs` is empty-optional, every representative is swept.
std::vector<SweepRow> stability_sweep(const CouplingMatrix& w, double k,
                                      const std::vector<double>& ks_values,
                                      const std::optional<std::vector<ConfigIndex>>& configs,
                                      unsigned threads = 1);

std::vector<SweepRow> sweep_rows(const std::vector<ConfigSpectrum>& spectra, double k,
                                 const std::vector<double>& ks_values);

struct EnergyLevelStats {
  double h = 0.0;
  std::uint64_t count = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::uint64_t n_stable = 0;
};

/// Min/max lambda_L and stable count per distinct H, ascending H.
std::vector<EnergyLevelStats> energy_level_stats(const CouplingMatrix& w, double k, double ks,
                                                 unsigned threads = 1);

std::vector<EnergyLevelStats> energy_level_stats(const std::vector<ConfigSpectrum>& spectra,
                                                 bool integer_valued, double k, double ks);

struct StabilityRecord {
  ConfigIndex config = 0;
  double h = 0.0;
  double lambda_l = 0.0;
  bool stable = false;
};

}  // namespace oim
