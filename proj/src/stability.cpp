#include "oim/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "oim/errors.hpp"
#include "oim/parallel.hpp"
#include "oim/symmetric_eigen.hpp"

namespace oim {

namespace {

void require_size(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw InputError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                     std::to_string(got));
}

// K = 1, K_s = 0 binarized Jacobian from spins and their local fields.
void fill_base_jacobian(const CouplingMatrix& w, std::span<const int> s,
                        std::span<const double> fields, SquareMatrix& j) {
  const auto n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto wrow = w.row(i);
    auto jrow = j.row(i);
    for (std::size_t k = 0; k < n; ++k) jrow[k] = wrow[k] * s[i] * s[k];
    jrow[i] = -s[i] * fields[i];
  }
}

}  // namespace

JacobianMatrix jacobian(const CouplingMatrix& w, const OimParams& p, const PhaseState& th) {
  const auto n = w.size();
  require_size(n, th.size());
  JacobianMatrix j(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t k : w.neighbours()[i]) {
      const double c = w(i, k) * std::cos(th[i] - th[k]);
      j(i, k) = p.k * c;
      diag += c;
    }
    j(i, i) = -p.k * diag - 2.0 * p.ks * std::cos(2.0 * th[i]);
  }
  return j;
}

JacobianMatrix jacobian_binarized(const CouplingMatrix& w, const OimParams& p,
                                  const SpinConfig& s) {
  const auto n = w.size();
  require_size(n, s.size());
  JacobianMatrix j(n);
  for (std::size_t i = 0; i < n; ++i) {
    double field = 0.0;
    for (std::size_t k : w.neighbours()[i]) {
      j(i, k) = p.k * w(i, k) * s[i] * s[k];
      field += w(i, k) * s[k];
    }
    j(i, i) = -p.k * s[i] * field - 2.0 * p.ks;
  }
  return j;
}

std::vector<double> BaseSpectrum::shifted(double k, double ks) const {
  std::vector<double> out(beta.size());
  std::transform(beta.begin(), beta.end(), out.begin(),
                 [&](double b) { return k * b - 2.0 * ks; });
  return out;
}

BaseSpectrum base_spectrum(const CouplingMatrix& w, const SpinConfig& s) {
  return {symmetric_eigenvalues(jacobian_binarized(w, OimParams{1.0, 0.0, 0.0}, s))};
}

double largest_lyapunov(const CouplingMatrix& w, const OimParams& p, const SpinConfig& s) {
  return p.k * base_spectrum(w, s).top() - 2.0 * p.ks;
}

double critical_ks(const CouplingMatrix& w, const SpinConfig& s, double k) {
  if (!std::isfinite(k) || !(k > 0.0)) throw InputError("K must be positive and finite");
  return k * base_spectrum(w, s).top() / 2.0;
}

bool is_equilibrium(const CouplingMatrix& w, const OimParams& p, const PhaseState& th,
                    double tol) {
  if (!(tol > 0.0)) throw InputError("equilibrium tolerance must be positive");
  const auto f = phase_velocity(w, p, th);
  return std::all_of(f.begin(), f.end(), [tol](double x) { return std::abs(x) <= tol; });
}

std::vector<ConfigSpectrum> landscape_spectra(const CouplingMatrix& w, unsigned threads) {
  require_exhaustive_size(w.size());
  const auto n = w.size();
  const auto total = num_representatives(n);
  const bool integer = w.is_integer_valued();
  std::vector<ConfigSpectrum> out(total);
  for_each_block(total, std::min<std::uint64_t>(total, 256), threads,
                 [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                   JacobiEigenSolver solver;
                   SquareMatrix j(n);
                   walk_gray_code(w, begin, end, [&](const GrayCodeWalker& g) {
                     fill_base_jacobian(w, g.spins(), g.fields(), j);
                     out[g.index()] = {g.index(), energy_bin(g.energy(), integer),
                                       solver.compute(j).front()};
                   });
                 });
  return out;
}

std::vector<ConfigSpectrum> config_spectra(const CouplingMatrix& w,
                                           const std::vector<ConfigIndex>& indices) {
  const bool integer = w.is_integer_valued();
  std::vector<ConfigSpectrum> out;
  out.reserve(indices.size());
  for (auto idx : indices) {
    const auto s = index_to_config(idx, w.size());
    out.push_back({idx, energy_bin(ising_energy(w, s), integer), base_spectrum(w, s).top()});
  }
  return out;
}

std::vector<SweepRow> sweep_rows(const std::vector<ConfigSpectrum>& spectra, double k,
                                 const std::vector<double>& ks_values) {
  std::vector<SweepRow> rows;
  rows.reserve(spectra.size() * ks_values.size());
  for (const auto& c : spectra)
    for (double ks : ks_values) rows.push_back({c.index, c.h, ks, k * c.beta_max - 2.0 * ks});
  return rows;
}

std::vector<SweepRow> stability_sweep(const CouplingMatrix& w, double k,
                                      const std::vector<double>& ks_values,
                                      const std::optional<std::vector<ConfigIndex>>& configs,
                                      unsigned threads) {
  if (ks_values.empty()) throw InputError("empty K_s grid");
  const auto spectra = configs ? config_spectra(w, *configs) : landscape_spectra(w, threads);
  return sweep_rows(spectra, k, ks_values);
}

std::vector<EnergyLevelStats> energy_level_stats(const std::vector<ConfigSpectrum>& spectra,
                                                 bool integer_valued, double k, double ks) {
  std::map<double, EnergyLevelStats> levels;
  for (const auto& c : spectra) {
    const double h = energy_bin(c.h, integer_valued);
    const double lambda = k * c.beta_max - 2.0 * ks;
    auto [it, fresh] = levels.try_emplace(h, EnergyLevelStats{h, 0, lambda, lambda, 0});
    auto& level = it->second;
    ++level.count;
    level.lambda_min = std::min(level.lambda_min, lambda);
    level.lambda_max = std::max(level.lambda_max, lambda);
    if (is_stable(lambda)) ++level.n_stable;
  }
  std::vector<EnergyLevelStats> out;
  out.reserve(levels.size());
  for (auto& [h, level] : levels) out.push_back(level);
  return out;
}

std::vector<EnergyLevelStats> energy_level_stats(const CouplingMatrix& w, double k, double ks,
                                                 unsigned threads) {
  return energy_level_stats(landscape_spectra(w, threads), w.is_integer_valued(), k, ks);
}

}  // namespace oim
