#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "oim/model.hpp"

namespace oim {

/// Index of a symmetry representative: bit b set means spin b+1 is -1.
/// Spin 0 is pinned to +1, so indices range over [0, 2^(n-1)).
using ConfigIndex = std::uint64_t;

/// Largest graph the exhaustive operations accept.
inline constexpr std::size_t kMaxExhaustiveNodes = 26;

/// Throws CapExceededError when n is 0 or above kMaxExhaustiveNodes.
void require_exhaustive_size(std::size_t n);

/// 2^(n-1); requires 1 <= n <= 64.
std::uint64_t num_representatives(std::size_t n);

SpinConfig index_to_config(ConfigIndex idx, std::size_t n);

/// Index of the representative of s; configurations with s_0 = -1 map to
/// the index of their mirror image.
ConfigIndex config_to_index(const SpinConfig& s);

/// Histogram bin for an energy: exact for integer couplings, otherwise
/// snapped to a 1e-9 grid.
inline double energy_bin(double h, bool integer_valued) noexcept {
  if (integer_valued) return std::round(h) + 0.0;
  return std::round(h * 1e9) / 1e9 + 0.0;
}

struct EnergyHistogram {
  std::map<double, std::uint64_t> bins;
  bool full_count = false;

  std::uint64_t total() const noexcept;
  double min_energy() const;
};

/// Histogram over all 2^(n-1) representatives (doubled when full_count).
EnergyHistogram enumerate_energies(const CouplingMatrix& w, bool full_count,
                                   unsigned threads = 1);

struct GroundStates {
  double min_energy = 0.0;
  /// Up to `cap` representatives, ascending index.
  std::vector<ConfigIndex> indices;
  std::vector<SpinConfig> configs;
  /// Number of representatives at the minimum.
  std::uint64_t representatives = 0;
  /// Number of minimizers including mirror images (2 * representatives).
  std::uint64_t total = 0;
};

GroundStates ground_states(const CouplingMatrix& w, std::size_t cap, unsigned threads = 1);

/// True iff the incremental Gray-code energies equal a naive recomputation
/// for every configuration. Requires n <= 16.
bool verify_enumeration(const CouplingMatrix& w);

/// Walks Gray-code steps [begin, end) over the representatives of w.
///
/// Step t visits index t ^ (t >> 1). The walker keeps the spins, the local
/// fields sum_j W_ij s_j and the energy up to date with one flip per step;
/// the first visited state is evaluated directly so blocks can start anywhere.
class GrayCodeWalker {
 public:
  GrayCodeWalker(const CouplingMatrix& w, std::uint64_t begin_step);

  ConfigIndex index() const noexcept { return index_; }
  double energy() const noexcept { return energy_; }
  std::span<const int> spins() const noexcept { return spins_; }
  std::span<const double> fields() const noexcept { return fields_; }

  /// Moves to step+1; flips exactly one spin.
  void advance();

 private:
  const CouplingMatrix* w_;
  std::uint64_t step_;
  ConfigIndex index_;
  double energy_;
  std::vector<int> spins_;
  std::vector<double> fields_;
};

template <class Visitor>
void walk_gray_code(const CouplingMatrix& w, std::uint64_t begin, std::uint64_t end,
                    Visitor&& visit) {
  if (begin >= end) return;
  GrayCodeWalker walker(w, begin);
  for (std::uint64_t t = begin;;) {
    visit(walker);
    if (++t == end) break;
    walker.advance();
  }
}

}  // namespace oim
