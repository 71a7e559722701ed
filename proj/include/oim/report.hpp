#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oim/dynamics.hpp"
#include "oim/enumeration.hpp"
#include "oim/experiments.hpp"
#include "oim/stability.hpp"

namespace oim {

inline constexpr const char* kToolVersion = "0.1.0";

/// Energies print as integers when integral, otherwise with 12 significant digits.
std::string format_energy(double h);
/// Reals print with 12 significant digits; negative zero prints as 0.
std::string format_real(double x);

void write_histogram_csv(std::ostream& out, const EnergyHistogram& hist);
void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRow& row);
void write_levels_csv(std::ostream& out, const std::vector<EnergyLevelStats>& levels);
void write_critical_csv(std::ostream& out, const std::vector<ConfigSpectrum>& spectra, double k);
void write_trace_csv(std::ostream& out, const Trajectory& traj);
void write_trials_csv(std::ostream& out, const TrialCampaignResult& result);

/// Everything needed to reproduce a run. The wall-clock timestamp is kept
/// out of report.json so reruns stay byte-identical; it goes to run_info.txt.
struct RunMetadata {
  std::string tool_version = kToolVersion;
  std::string prng;
  std::string graph_provenance;
  nlohmann::json parameters = nlohmann::json::object();
  std::string timestamp;
};

RunMetadata make_metadata(std::string graph_provenance, nlohmann::json parameters);

nlohmann::json readout_to_json(const ReadoutResult& r);
nlohmann::json campaign_to_json(const TrialCampaignResult& result, const RunMetadata& meta);

/// Aggregate numbers recoverable from report.json.
struct CampaignAggregates {
  std::size_t n_trials = 0;
  std::map<double, std::uint64_t> histogram;
  std::uint64_t n_nonbinarized = 0;
  double success_rate = 0.0;
  double reference_h = 0.0;
  bool reference_exact = false;

  friend bool operator==(const CampaignAggregates&, const CampaignAggregates&) = default;
};

CampaignAggregates aggregates_of(const TrialCampaignResult& result);
CampaignAggregates parse_campaign_report(const nlohmann::json& report);

/// Writes trials.csv, report.json and run_info.txt into `dir` (created if
/// missing). Throws InputError with the offending path on I/O failure.
void write_report(const TrialCampaignResult& result, const RunMetadata& meta,
                  const std::filesystem::path& dir);

/// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace oim
