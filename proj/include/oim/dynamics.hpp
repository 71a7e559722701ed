#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oim/errors.hpp"
#include "oim/model.hpp"
#include "oim/random.hpp"

namespace oim {

struct SimConfig {
  double dt = 0.01;
  double t_max = 200.0;
  double eq_tol = 1e-6;
  std::size_t eq_window = 10;
  std::size_t record_stride = 10;
  /// Noiseless relaxation applied after a noisy run before readout.
  double settle_time = 10.0;
  /// Angular tolerance for binarized readout.
  double readout_tol = 0.1;

  void validate() const;
  std::size_t total_steps() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energies;
  std::size_t steps = 0;
  /// Deterministic runs: the equilibrium window was satisfied before t_max.
  bool reached_equilibrium = false;

  const PhaseState& final_state() const { return states.back(); }
};

/// Thrown when integration produces a non-finite phase; carries the
/// trajectory recorded up to (and including) the last finite state.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(std::size_t step, Trajectory partial);

  std::size_t step() const noexcept { return step_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  std::size_t step_;
  Trajectory partial_;
};

/// Evaluates the phase velocity with O(n) trig calls per evaluation using
/// sin(a - b) = sin a cos b - cos a sin b. Holds scratch buffers, so one
/// instance per thread.
class VelocityField {
 public:
  VelocityField(const CouplingMatrix& w, const OimParams& p);

  void evaluate(std::span<const double> theta, std::span<double> out);
  std::size_t size() const noexcept { return w_->size(); }

 private:
  const CouplingMatrix* w_;
  OimParams p_;
  std::vector<double> sin_, cos_;
};

/// One classical RK4 step of the noiseless dynamics.
PhaseState step_deterministic(const CouplingMatrix& w, const OimParams& p, const PhaseState& th,
                              double dt);

/// One Euler-Maruyama step: theta + f dt + K_n sqrt(dt) xi.
PhaseState step_sde(const CouplingMatrix& w, const OimParams& p, const PhaseState& th,
                    double dt, Rng& rng);

/// Integrates from th0. With rng == nullptr the RK4 integrator runs until
/// ||f||_inf <= eq_tol holds for eq_window consecutive states or t_max is
/// reached; otherwise Euler-Maruyama runs to t_max. The final state is
/// always recorded.
Trajectory integrate(const CouplingMatrix& w, const OimParams& p, const PhaseState& th0,
                     const SimConfig& sim, Rng* rng);

/// Uniform phases on [0, 2 pi).
PhaseState random_phases(std::size_t n, Rng& rng);

struct Binarized {
  SpinConfig spins;
};
struct NonBinarized {
  double worst_deviation;
};
using ReadoutResult = std::variant<Binarized, NonBinarized>;

inline bool is_binarized(const ReadoutResult& r) noexcept {
  return std::holds_alternative<Binarized>(r);
}

/// Maps each phase to +1 (near 0) or -1 (near pi); NonBinarized if any
/// phase is farther than tol from {0, pi}. Requires 0 < tol < pi/4.
ReadoutResult readout(const PhaseState& th, double tol);

struct EnergyTraceReport {
  double max_increase = 0.0;
  bool pass = true;
};

/// Largest sample-to-sample rise in E; pass iff each rise is at most
/// 1e-8 * max(1, |E|).
EnergyTraceReport energy_trace(const Trajectory& traj);

}  // namespace oim
