#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oim/graph.hpp"
#include "oim/matrix.hpp"

namespace oim {

/// Symmetric, zero-diagonal interaction matrix [W].
class CouplingMatrix {
 public:
  /// Validates symmetry and zero diagonal.
  explicit CouplingMatrix(SquareMatrix w);

  std::size_t size() const noexcept { return w_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return w_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return w_.row(i); }
  const SquareMatrix& matrix() const noexcept { return w_; }

  /// Neighbour lists (nonzero off-diagonal entries) for sparse updates.
  const std::vector<std::vector<std::size_t>>& neighbours() const noexcept { return nbrs_; }

  /// True when every entry is an integer; energies are then exact in double.
  bool is_integer_valued() const noexcept { return integer_valued_; }

 private:
  SquareMatrix w_;
  std::vector<std::vector<std::size_t>> nbrs_;
  bool integer_valued_ = true;
};

/// Vector of +1/-1 spins.
class SpinConfig {
 public:
  explicit SpinConfig(std::vector<int> s);

  std::size_t size() const noexcept { return s_.size(); }
  int operator[](std::size_t i) const noexcept { return s_[i]; }
  std::span<const int> values() const noexcept { return s_; }

  SpinConfig flipped(std::size_t k) const;
  SpinConfig negated() const;

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<int> s_;
};

/// Oscillator phases in radians, interpreted mod 2*pi.
class PhaseState {
 public:
  PhaseState() = default;
  explicit PhaseState(std::vector<double> theta);

  /// Phase image of a spin configuration: +1 -> 0, -1 -> pi.
  static PhaseState from_spins(const SpinConfig& s);

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const noexcept { return theta_[i]; }
  std::span<const double> values() const noexcept { return theta_; }

  friend bool operator==(const PhaseState&, const PhaseState&) = default;

 private:
  std::vector<double> theta_;
};

/// Coupling strength K, second-harmonic injection K_s and noise amplitude K_n.
struct OimParams {
  double k = 1.0;
  double ks = 0.0;
  double kn = 0.0;

  /// Throws InputError unless k > 0, ks >= 0, kn >= 0, all finite.
  void validate() const;
};

/// Antiferromagnetic MaxCut mapping: W_uv = W_vu = -weight(u, v).
CouplingMatrix coupling_from_graph(const Graph& g);

/// H = -sum_{i<j} W_ij s_i s_j.
double ising_energy(const CouplingMatrix& w, const SpinConfig& s);

/// MC = (sum of edge weights - H) / 2.
double maxcut_from_energy(const Graph& g, double h);

/// sum_j W_ij s_j.
double local_field(const CouplingMatrix& w, const SpinConfig& s, std::size_t i);

/// E = -K sum_{i != j} W_ij cos(theta_i - theta_j) - K_s sum_i cos(2 theta_i).
/// The double sum runs over ordered pairs, so each edge contributes twice.
double lyapunov_energy(const CouplingMatrix& w, const OimParams& p, const PhaseState& th);

/// f_i = -K sum_j W_ij sin(theta_i - theta_j) - K_s sin(2 theta_i), which is
/// -(1/2) dE/dtheta_i.
std::vector<double> phase_velocity(const CouplingMatrix& w, const OimParams& p,
                                   const PhaseState& th);

}  // namespace oim
