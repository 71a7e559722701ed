#include "oim/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oim/errors.hpp"

namespace oim {

namespace {

void require_size(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw InputError(std::string(what) + " has length " + std::to_string(got) + ", expected " +
                     std::to_string(expected));
}

}  // namespace

CouplingMatrix::CouplingMatrix(SquareMatrix w) : w_(std::move(w)), nbrs_(w_.size()) {
  const auto n = w_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (w_(i, i) != 0.0) throw InputError("coupling matrix has nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double x = w_(i, j);
      if (!std::isfinite(x)) throw InputError("coupling matrix has non-finite entry");
      if (x != w_(j, i)) throw InputError("coupling matrix is not symmetric");
      if (x != 0.0) nbrs_[i].push_back(j);
      if (x != std::round(x)) integer_valued_ = false;
    }
  }
}

SpinConfig::SpinConfig(std::vector<int> s) : s_(std::move(s)) {
  for (int x : s_)
    if (x != 1 && x != -1) throw InputError("spin values must be +1 or -1");
}

SpinConfig SpinConfig::flipped(std::size_t k) const {
  if (k >= s_.size()) throw InputError("spin index out of range");
  auto s = s_;
  s[k] = -s[k];
  return SpinConfig(std::move(s));
}

SpinConfig SpinConfig::negated() const {
  auto s = s_;
  for (int& x : s) x = -x;
  return SpinConfig(std::move(s));
}

PhaseState::PhaseState(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double x : theta_)
    if (!std::isfinite(x)) throw InputError("phase state has non-finite entry");
}

PhaseState PhaseState::from_spins(const SpinConfig& s) {
  std::vector<double> theta(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) theta[i] = s[i] > 0 ? 0.0 : std::numbers::pi;
  return PhaseState(std::move(theta));
}

void OimParams::validate() const {
  if (!std::isfinite(k) || !(k > 0.0)) throw InputError("K must be positive and finite");
  if (!std::isfinite(ks) || ks < 0.0) throw InputError("K_s must be non-negative and finite");
  if (!std::isfinite(kn) || kn < 0.0) throw InputError("K_n must be non-negative and finite");
}

CouplingMatrix coupling_from_graph(const Graph& g) {
  SquareMatrix w(g.num_nodes());
  for (const auto& e : g.edges()) {
    w(e.u, e.v) = -e.weight;
    w(e.v, e.u) = -e.weight;
  }
  return CouplingMatrix(std::move(w));
}

double ising_energy(const CouplingMatrix& w, const SpinConfig& s) {
  require_size(w.size(), s.size(), "spin configuration");
  double h = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j : w.neighbours()[i])
      if (j > i) h -= w(i, j) * s[i] * s[j];
  return h;
}

double maxcut_from_energy(const Graph& g, double h) { return (g.total_weight() - h) / 2.0; }

double local_field(const CouplingMatrix& w, const SpinConfig& s, std::size_t i) {
  require_size(w.size(), s.size(), "spin configuration");
  if (i >= w.size()) throw InputError("node index out of range");
  double f = 0.0;
  for (std::size_t j : w.neighbours()[i]) f += w(i, j) * s[j];
  return f;
}

double lyapunov_energy(const CouplingMatrix& w, const OimParams& p, const PhaseState& th) {
  require_size(w.size(), th.size(), "phase state");
  double coupling = 0.0;
  double injection = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j : w.neighbours()[i]) coupling += w(i, j) * std::cos(th[i] - th[j]);
    injection += std::cos(2.0 * th[i]);
  }
  return -p.k * coupling - p.ks * injection;
}

std::vector<double> phase_velocity(const CouplingMatrix& w, const OimParams& p,
                                   const PhaseState& th) {
  require_size(w.size(), th.size(), "phase state");
  std::vector<double> f(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j : w.neighbours()[i]) sum += w(i, j) * std::sin(th[i] - th[j]);
    f[i] = -p.k * sum - p.ks * std::sin(2.0 * th[i]);
  }
  return f;
}

}  // namespace oim
