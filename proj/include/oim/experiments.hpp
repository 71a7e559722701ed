#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oim/dynamics.hpp"
#include "oim/enumeration.hpp"
#include "oim/model.hpp"
#include "oim/stability.hpp"

namespace oim {

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  ReadoutResult readout = NonBinarized{0.0};
  std::optional<double> h;
  std::optional<double> final_lambda_l;
  std::size_t steps = 0;
  /// Set when integration failed; the trial then counts as non-binarized.
  std::optional<std::string> failure;
};

struct TrialCampaignResult {
  OimParams params;
  SimConfig sim;
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> trials;
  std::map<double, std::uint64_t> histogram;
  std::uint64_t n_nonbinarized = 0;
  double success_rate = 0.0;
  /// Energy that counts as success and whether it is the exact ground energy.
  double reference_h = 0.0;
  bool reference_exact = false;
};

/// Initial phases of trial `trial` for a campaign with `master_seed`.
PhaseState trial_initial_state(std::size_t n, std::uint64_t master_seed, std::size_t trial);

/// Runs one trial: sample theta0, integrate, settle (noisy runs), read out.
TrialResult run_trial(const CouplingMatrix& w, const OimParams& p, const SimConfig& sim,
                      std::uint64_t master_seed, std::size_t trial);

/// Independent trials with streams (master_seed, i). Success is measured
/// against `reference_h` when given, otherwise the exact minimum for
/// n <= 26, otherwise the best energy seen.
TrialCampaignResult run_trials(const CouplingMatrix& w, const OimParams& p, const SimConfig& sim,
                               std::size_t n_trials, std::uint64_t master_seed,
                               unsigned threads = 1,
                               std::optional<double> reference_h = std::nullopt);

/// One campaign per K_s value, all sharing the trial streams.
std::vector<TrialCampaignResult> ks_campaign(const CouplingMatrix& w, double k, double kn,
                                             const std::vector<double>& ks_values,
                                             const SimConfig& sim, std::size_t n_trials,
                                             std::uint64_t master_seed, unsigned threads = 1);

struct StableSetReport {
  std::vector<StabilityRecord> records;
  std::uint64_t total_stable = 0;
  bool truncated = false;
};

/// Every stable representative at (k, ks), sorted by (H, index); at most
/// `cap` records are listed and truncation is flagged.
StableSetReport stable_set_report(const CouplingMatrix& w, double k, double ks, std::size_t cap,
                                  unsigned threads = 1);

}  // namespace oim
