#include "oim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "oim/errors.hpp"
#include "oim/parallel.hpp"

namespace oim {

PhaseState trial_initial_state(std::size_t n, std::uint64_t master_seed, std::size_t trial) {
  Rng rng = Rng::stream(master_seed, trial);
  return random_phases(n, rng);
}

TrialResult run_trial(const CouplingMatrix& w, const OimParams& p, const SimConfig& sim,
                      std::uint64_t master_seed, std::size_t trial) {
  TrialResult result;
  result.trial = trial;
  result.seed = derive_stream_seed(master_seed, trial);
  Rng rng(result.seed);
  const PhaseState theta0 = random_phases(w.size(), rng);

  try {
    if (p.kn == 0.0) {
      const auto traj = integrate(w, p, theta0, sim, nullptr);
      result.steps = traj.steps;
      result.converged = traj.reached_equilibrium;
      result.readout = readout(traj.final_state(), sim.readout_tol);
    } else {
      const auto noisy = integrate(w, p, theta0, sim, &rng);
      result.steps = noisy.steps;
      const auto raw = readout(noisy.final_state(), sim.readout_tol);
      PhaseState settled = noisy.final_state();
      if (sim.settle_time >= sim.dt) {
        SimConfig settle = sim;
        settle.t_max = sim.settle_time;
        settle.record_stride = std::numeric_limits<std::size_t>::max();
        const auto relaxed = integrate(w, OimParams{p.k, p.ks, 0.0}, settled, settle, nullptr);
        result.steps += relaxed.steps;
        settled = relaxed.final_state();
      }
      result.readout = readout(settled, sim.readout_tol);
      const auto* before = std::get_if<Binarized>(&raw);
      const auto* after = std::get_if<Binarized>(&result.readout);
      result.converged = before != nullptr && after != nullptr && before->spins == after->spins;
    }
  } catch (const NumericalError& e) {
    result.failure = e.what();
    result.converged = false;
    result.readout = NonBinarized{std::numbers::pi / 2};
    return result;
  }

  if (const auto* b = std::get_if<Binarized>(&result.readout)) {
    result.h = energy_bin(ising_energy(w, b->spins), w.is_integer_valued());
    result.final_lambda_l = largest_lyapunov(w, p, b->spins);
  }
  return result;
}

TrialCampaignResult run_trials(const CouplingMatrix& w, const OimParams& p, const SimConfig& sim,
                               std::size_t n_trials, std::uint64_t master_seed, unsigned threads,
                               std::optional<double> reference_h) {
  p.validate();
  sim.validate();
  if (n_trials < 1) throw InputError("need at least one trial");

  TrialCampaignResult out;
  out.params = p;
  out.sim = sim;
  out.master_seed = master_seed;
  out.trials.resize(n_trials);
  for_each_block(n_trials, n_trials, threads,
                 [&](std::uint64_t i, std::uint64_t, std::uint64_t) {
                   out.trials[i] = run_trial(w, p, sim, master_seed, i);
                 });

  for (const auto& t : out.trials) {
    if (t.h) {
      ++out.histogram[*t.h];
    } else {
      ++out.n_nonbinarized;
    }
  }

  if (reference_h) {
    out.reference_h = *reference_h;
    out.reference_exact = true;
  } else if (w.size() <= kMaxExhaustiveNodes) {
    out.reference_h = ground_states(w, 0, threads).min_energy;
    out.reference_exact = true;
  } else {
    out.reference_h = out.histogram.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : out.histogram.begin()->first;
    out.reference_exact = false;
  }

  std::size_t hits = 0;
  for (const auto& t : out.trials)
    if (t.h && std::abs(*t.h - out.reference_h) <= 1e-9) ++hits;
  out.success_rate = static_cast<double>(hits) / static_cast<double>(n_trials);
  return out;
}

std::vector<TrialCampaignResult> ks_campaign(const CouplingMatrix& w, double k, double kn,
                                             const std::vector<double>& ks_values,
                                             const SimConfig& sim, std::size_t n_trials,
                                             std::uint64_t master_seed, unsigned threads) {
  if (ks_values.empty()) throw InputError("empty K_s list");
  for (double ks : ks_values) OimParams{k, ks, kn}.validate();
  std::optional<double> reference;
  if (w.size() <= kMaxExhaustiveNodes) reference = ground_states(w, 0, threads).min_energy;
  std::vector<TrialCampaignResult> out;
  out.reserve(ks_values.size());
  for (double ks : ks_values)
    out.push_back(run_trials(w, OimParams{k, ks, kn}, sim, n_trials, master_seed, threads,
                             reference));
  return out;
}

StableSetReport stable_set_report(const CouplingMatrix& w, double k, double ks, std::size_t cap,
                                  unsigned threads) {
  OimParams{k, ks, 0.0}.validate();
  StableSetReport report;
  for (const auto& c : landscape_spectra(w, threads)) {
    const double lambda = k * c.beta_max - 2.0 * ks;
    if (is_stable(lambda)) report.records.push_back({c.index, c.h, lambda, true});
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const StabilityRecord& a, const StabilityRecord& b) {
              return a.h != b.h ? a.h < b.h : a.config < b.config;
            });
  report.total_stable = report.records.size();
  if (report.records.size() > cap) {
    report.records.resize(cap);
    report.truncated = true;
  }
  return report;
}

}  // namespace oim
