#include "oim/enumeration.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "oim/errors.hpp"
#include "oim/parallel.hpp"

namespace oim {

namespace {

constexpr std::uint64_t kMaxBlocks = 64;

std::uint64_t block_count(std::uint64_t total) { return std::min(total, kMaxBlocks); }

}  // namespace

void require_exhaustive_size(std::size_t n) {
  if (n == 0 || n > kMaxExhaustiveNodes)
    throw CapExceededError("exhaustive sweep supports 1.." + std::to_string(kMaxExhaustiveNodes) +
                           " nodes, graph has " + std::to_string(n));
}

std::uint64_t num_representatives(std::size_t n) {
  if (n == 0 || n > 64) throw InputError("representative count needs 1 <= n <= 64");
  return std::uint64_t{1} << (n - 1);
}

SpinConfig index_to_config(ConfigIndex idx, std::size_t n) {
  if (idx >= num_representatives(n))
    throw InputError("config index " + std::to_string(idx) + " out of range for n=" +
                     std::to_string(n));
  std::vector<int> s(n, 1);
  for (std::size_t b = 0; b + 1 < n; ++b)
    if ((idx >> b) & 1U) s[b + 1] = -1;
  return SpinConfig(std::move(s));
}

ConfigIndex config_to_index(const SpinConfig& s) {
  if (s.size() == 0 || s.size() > 64) throw InputError("config length must be 1..64");
  const int sign = s[0];
  ConfigIndex idx = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] != sign) idx |= ConfigIndex{1} << (i - 1);
  return idx;
}

std::uint64_t EnergyHistogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [h, c] : bins) sum += c;
  return sum;
}

double EnergyHistogram::min_energy() const {
  if (bins.empty()) throw InputError("empty histogram");
  return bins.begin()->first;
}

GrayCodeWalker::GrayCodeWalker(const CouplingMatrix& w, std::uint64_t begin_step)
    : w_(&w), step_(begin_step), index_(begin_step ^ (begin_step >> 1)) {
  const auto n = w.size();
  const auto s = index_to_config(index_, n);
  spins_.assign(s.values().begin(), s.values().end());
  fields_.assign(n, 0.0);
  double twice_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : w.neighbours()[i]) fields_[i] += w(i, j) * spins_[j];
    twice_energy -= spins_[i] * fields_[i];
  }
  energy_ = twice_energy / 2.0;
}

void GrayCodeWalker::advance() {
  ++step_;
  const auto bit = static_cast<std::size_t>(std::countr_zero(step_));
  const std::size_t k = bit + 1;
  const int sk = spins_[k];
  energy_ += 2.0 * sk * fields_[k];
  const auto row = w_->row(k);
  for (std::size_t j : w_->neighbours()[k]) fields_[j] -= 2.0 * row[j] * sk;
  spins_[k] = -sk;
  index_ ^= ConfigIndex{1} << bit;
}

EnergyHistogram enumerate_energies(const CouplingMatrix& w, bool full_count, unsigned threads) {
  require_exhaustive_size(w.size());
  const auto total = num_representatives(w.size());
  const auto blocks = block_count(total);
  const bool integer = w.is_integer_valued();
  std::vector<std::map<double, std::uint64_t>> partial(blocks);
  for_each_block(total, blocks, threads, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
    auto& bins = partial[b];
    walk_gray_code(w, begin, end,
                   [&](const GrayCodeWalker& g) { ++bins[energy_bin(g.energy(), integer)]; });
  });
  EnergyHistogram hist;
  hist.full_count = full_count;
  for (const auto& bins : partial)
    for (const auto& [h, c] : bins) hist.bins[h] += full_count ? 2 * c : c;
  return hist;
}

GroundStates ground_states(const CouplingMatrix& w, std::size_t cap, unsigned threads) {
  require_exhaustive_size(w.size());
  const auto total = num_representatives(w.size());
  const auto blocks = block_count(total);
  const bool integer = w.is_integer_valued();

  struct Partial {
    double min = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
    std::vector<ConfigIndex> smallest;
  };
  auto trim = [cap](std::vector<ConfigIndex>& v) {
    if (v.size() <= cap) return;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cap), v.end());
    v.resize(cap);
  };
  std::vector<Partial> partial(blocks);
  for_each_block(total, blocks, threads, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
    auto& p = partial[b];
    walk_gray_code(w, begin, end, [&](const GrayCodeWalker& g) {
      const double h = energy_bin(g.energy(), integer);
      if (h > p.min) return;
      if (h < p.min) {
        p.min = h;
        p.count = 0;
        p.smallest.clear();
      }
      ++p.count;
      p.smallest.push_back(g.index());
      if (p.smallest.size() > 2 * cap + 64) trim(p.smallest);
    });
  });

  GroundStates out;
  out.min_energy = std::numeric_limits<double>::infinity();
  for (const auto& p : partial) out.min_energy = std::min(out.min_energy, p.min);
  std::vector<ConfigIndex> indices;
  for (const auto& p : partial) {
    if (p.min != out.min_energy) continue;
    out.representatives += p.count;
    indices.insert(indices.end(), p.smallest.begin(), p.smallest.end());
  }
  trim(indices);
  std::sort(indices.begin(), indices.end());
  out.total = 2 * out.representatives;
  out.indices = indices;
  for (auto idx : indices) out.configs.push_back(index_to_config(idx, w.size()));
  return out;
}

bool verify_enumeration(const CouplingMatrix& w) {
  if (w.size() > 16) throw InputError("verify_enumeration supports n <= 16");
  require_exhaustive_size(w.size());
  double scale = 1.0;
  for (double x : w.matrix().data()) scale += std::abs(x);
  const double tol = w.is_integer_valued() ? 0.0 : 1e-9 * scale;
  bool ok = true;
  walk_gray_code(w, 0, num_representatives(w.size()), [&](const GrayCodeWalker& g) {
    if (!ok) return;
    const auto s = index_to_config(g.index(), w.size());
    if (!std::equal(s.values().begin(), s.values().end(), g.spins().begin())) {
      ok = false;
      return;
    }
    if (std::abs(g.energy() - ising_energy(w, s)) > tol) ok = false;
    for (std::size_t i = 0; ok && i < w.size(); ++i)
      if (std::abs(g.fields()[i] - local_field(w, s, i)) > tol) ok = false;
  });
  return ok;
}

}  // namespace oim
