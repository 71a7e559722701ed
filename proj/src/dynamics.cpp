#include "oim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace oim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_size(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw InputError("phase state has length " + std::to_string(got) + ", expected " +
                     std::to_string(expected));
}

// Scratch space for one RK4 step.
struct Rk4Stepper {
  explicit Rk4Stepper(std::size_t n) : k2(n), k3(n), k4(n), tmp(n) {}

  // Advances theta in place; k1 = f(theta) is supplied by the caller.
  void step(VelocityField& field, std::span<double> theta, std::span<const double> k1,
            double dt) {
    const auto n = theta.size();
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k1[i];
    field.evaluate(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k2[i];
    field.evaluate(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + dt * k3[i];
    field.evaluate(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  std::vector<double> k2, k3, k4, tmp;
};

}  // namespace

void SimConfig::validate() const {
  if (!std::isfinite(dt) || !(dt > 0.0)) throw InputError("dt must be positive");
  if (!std::isfinite(t_max) || t_max < dt) throw InputError("t_max must be at least dt");
  if (!(eq_tol > 0.0)) throw InputError("eq_tol must be positive");
  if (eq_window < 1) throw InputError("eq_window must be at least 1");
  if (record_stride < 1) throw InputError("record_stride must be at least 1");
  if (!std::isfinite(settle_time) || settle_time < 0.0)
    throw InputError("settle_time must be non-negative");
  if (!(readout_tol > 0.0 && readout_tol < std::numbers::pi / 4))
    throw InputError("readout tolerance must lie in (0, pi/4)");
}

std::size_t SimConfig::total_steps() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t_max / dt)));
}

IntegrationError::IntegrationError(std::size_t step, Trajectory partial)
    : NumericalError("non-finite phase produced at step " + std::to_string(step)),
      step_(step),
      partial_(std::move(partial)) {}

VelocityField::VelocityField(const CouplingMatrix& w, const OimParams& p)
    : w_(&w), p_(p), sin_(w.size()), cos_(w.size()) {}

void VelocityField::evaluate(std::span<const double> theta, std::span<double> out) {
  const auto n = w_->size();
  for (std::size_t i = 0; i < n; ++i) {
    sin_[i] = std::sin(theta[i]);
    cos_[i] = std::cos(theta[i]);
  }
  const auto& nbrs = w_->neighbours();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = w_->row(i);
    double wc = 0.0, ws = 0.0;
    for (std::size_t j : nbrs[i]) {
      wc += row[j] * cos_[j];
      ws += row[j] * sin_[j];
    }
    // sum_j W_ij sin(theta_i - theta_j) = sin_i * wc - cos_i * ws
    out[i] = -p_.k * (sin_[i] * wc - cos_[i] * ws) - p_.ks * 2.0 * sin_[i] * cos_[i];
  }
}

PhaseState step_deterministic(const CouplingMatrix& w, const OimParams& p, const PhaseState& th,
                              double dt) {
  require_size(w.size(), th.size());
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  VelocityField field(w, p);
  std::vector<double> theta(th.values().begin(), th.values().end());
  std::vector<double> k1(theta.size());
  field.evaluate(theta, k1);
  Rk4Stepper(theta.size()).step(field, theta, k1, dt);
  if (!all_finite(theta)) throw NumericalError("non-finite phase produced at step 1");
  return PhaseState(std::move(theta));
}

PhaseState step_sde(const CouplingMatrix& w, const OimParams& p, const PhaseState& th, double dt,
                    Rng& rng) {
  require_size(w.size(), th.size());
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  VelocityField field(w, p);
  std::vector<double> theta(th.values().begin(), th.values().end());
  std::vector<double> f(theta.size());
  field.evaluate(theta, f);
  const double noise = p.kn * std::sqrt(dt);
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += f[i] * dt + noise * rng.normal();
  if (!all_finite(theta)) throw NumericalError("non-finite phase produced at step 1");
  return PhaseState(std::move(theta));
}

Trajectory integrate(const CouplingMatrix& w, const OimParams& p, const PhaseState& th0,
                     const SimConfig& sim, Rng* rng) {
  p.validate();
  sim.validate();
  require_size(w.size(), th0.size());
  const auto n = w.size();
  const auto total = sim.total_steps();

  std::vector<double> theta(th0.values().begin(), th0.values().end());
  std::vector<double> f(n);
  VelocityField field(w, p);
  Rk4Stepper rk4(n);
  Trajectory traj;
  std::size_t last_recorded = 0;

  auto record = [&](std::size_t step) {
    PhaseState state(theta);
    traj.times.push_back(static_cast<double>(step) * sim.dt);
    traj.energies.push_back(lyapunov_energy(w, p, state));
    traj.states.push_back(std::move(state));
    last_recorded = step;
  };
  record(0);

  const double noise = p.kn * std::sqrt(sim.dt);
  std::size_t step = 0;
  std::size_t quiet = 0;
  while (true) {
    field.evaluate(theta, f);
    if (rng == nullptr) {
      quiet = inf_norm(f) <= sim.eq_tol ? quiet + 1 : 0;
      if (quiet >= sim.eq_window) {
        traj.reached_equilibrium = true;
        break;
      }
    }
    if (step == total) break;
    if (rng == nullptr) {
      rk4.step(field, theta, f, sim.dt);
    } else {
      for (std::size_t i = 0; i < n; ++i) theta[i] += f[i] * sim.dt + noise * rng->normal();
    }
    ++step;
    if (!all_finite(theta)) {
      traj.steps = step - 1;
      throw IntegrationError(step, std::move(traj));
    }
    if (step % sim.record_stride == 0) record(step);
  }
  if (last_recorded != step) record(step);
  traj.steps = step;
  return traj;
}

PhaseState random_phases(std::size_t n, Rng& rng) {
  std::vector<double> theta(n);
  for (double& x : theta) x = kTwoPi * rng.uniform();
  return PhaseState(std::move(theta));
}

ReadoutResult readout(const PhaseState& th, double tol) {
  if (!(tol > 0.0 && tol < std::numbers::pi / 4))
    throw InputError("readout tolerance must lie in (0, pi/4)");
  std::vector<int> spins(th.size());
  double worst = 0.0;
  bool binarized = true;
  for (std::size_t i = 0; i < th.size(); ++i) {
    double r = std::fmod(th[i], kTwoPi);
    if (r < 0.0) r += kTwoPi;
    const double to_zero = std::min(r, kTwoPi - r);
    const double to_pi = std::abs(r - std::numbers::pi);
    worst = std::max(worst, std::min(to_zero, to_pi));
    if (to_zero <= tol) {
      spins[i] = 1;
    } else if (to_pi <= tol) {
      spins[i] = -1;
    } else {
      binarized = false;
    }
  }
  if (!binarized) return NonBinarized{worst};
  return Binarized{SpinConfig(std::move(spins))};
}

EnergyTraceReport energy_trace(const Trajectory& traj) {
  EnergyTraceReport report;
  const auto& e = traj.energies;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double rise = e[i] - e[i - 1];
    report.max_increase = std::max(report.max_increase, rise);
    if (rise > 1e-8 * std::max(1.0, std::abs(e[i - 1]))) report.pass = false;
  }
  return report;
}

}  // namespace oim
