#pragma once

#include <cstdint>
#include <random>

namespace oim {

/// Identity of the generator stack, recorded in run metadata.
inline constexpr const char* kPrngIdentity =
    "std::mt19937_64; streams seeded by splitmix64(master_seed, stream_index); "
    "uniforms from the top 53 bits; normals by trigonometric Box-Muller";

/// One step of the splitmix64 mixer.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for stream `index` of a campaign with `master_seed`.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Seeded generator with platform-independent output.
///
/// std::mt19937_64 is fully specified by the standard; the distributions are
/// not, so uniform, bounded-integer and normal variates are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(derive_stream_seed(master_seed, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform integer on [0, bound); bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace oim
