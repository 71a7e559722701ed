#include "oim/report.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>

#include "oim/errors.hpp"
#include "oim/random.hpp"

namespace oim {

using nlohmann::json;

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_energy(double h) {
  if (std::isfinite(h) && h == std::round(h) && std::abs(h) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(h));
    return buf;
  }
  return format_real(h);
}

void write_histogram_csv(std::ostream& out, const EnergyHistogram& hist) {
  out << "H,count\n";
  for (const auto& [h, c] : hist.bins) out << format_energy(h) << ',' << c << '\n';
}

void write_sweep_header(std::ostream& out) { out << "config_index,H,ks,lambda_L\n"; }

void write_sweep_row(std::ostream& out, const SweepRow& row) {
  out << row.config << ',' << format_energy(row.h) << ',' << format_real(row.ks) << ','
      << format_real(row.lambda_l) << '\n';
}

void write_levels_csv(std::ostream& out, const std::vector<EnergyLevelStats>& levels) {
  out << "H,count,lambda_min,lambda_max,n_stable\n";
  for (const auto& l : levels)
    out << format_energy(l.h) << ',' << l.count << ',' << format_real(l.lambda_min) << ','
        << format_real(l.lambda_max) << ',' << l.n_stable << '\n';
}

void write_critical_csv(std::ostream& out, const std::vector<ConfigSpectrum>& spectra, double k) {
  out << "config_index,H,ks_critical\n";
  for (const auto& c : spectra)
    out << c.index << ',' << format_energy(c.h) << ',' << format_real(k * c.beta_max / 2.0)
        << '\n';
}

void write_trace_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",theta_" << i;
  out << ",E\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    out << format_real(traj.times[s]);
    for (double th : traj.states[s].values()) out << ',' << format_real(th);
    out << ',' << format_real(traj.energies[s]) << '\n';
  }
}

void write_trials_csv(std::ostream& out, const TrialCampaignResult& result) {
  out << "trial,seed,converged,binarized,H,lambda_L,steps\n";
  for (const auto& t : result.trials) {
    out << t.trial << ',' << t.seed << ',' << (t.converged ? 1 : 0) << ','
        << (is_binarized(t.readout) ? 1 : 0) << ',' << (t.h ? format_energy(*t.h) : "") << ','
        << (t.final_lambda_l ? format_real(*t.final_lambda_l) : "") << ',' << t.steps << '\n';
  }
}

RunMetadata make_metadata(std::string graph_provenance, json parameters) {
  RunMetadata meta;
  meta.prng = kPrngIdentity;
  meta.graph_provenance = std::move(graph_provenance);
  meta.parameters = std::move(parameters);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  meta.timestamp = buf;
  return meta;
}

json readout_to_json(const ReadoutResult& r) {
  if (const auto* b = std::get_if<Binarized>(&r)) {
    json spins = json::array();
    for (int s : b->spins.values()) spins.push_back(s);
    return {{"kind", "binarized"}, {"spins", spins}};
  }
  return {{"kind", "non_binarized"},
          {"worst_deviation", std::get<NonBinarized>(r).worst_deviation}};
}

namespace {

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json campaign_to_json(const TrialCampaignResult& result, const RunMetadata& meta) {
  json histogram = json::array();
  for (const auto& [h, c] : result.histogram) histogram.push_back({{"H", h}, {"count", c}});

  json trials = json::array();
  for (const auto& t : result.trials) {
    json row = {{"trial", t.trial},
                {"seed", t.seed},
                {"converged", t.converged},
                {"readout", readout_to_json(t.readout)},
                {"H", optional_number(t.h)},
                {"lambda_L", optional_number(t.final_lambda_l)},
                {"steps", t.steps}};
    if (t.failure) row["failure"] = *t.failure;
    trials.push_back(std::move(row));
  }

  const auto& sim = result.sim;
  return {
      {"metadata",
       {{"tool_version", meta.tool_version},
        {"prng", meta.prng},
        {"graph", meta.graph_provenance},
        {"parameters", meta.parameters}}},
      {"params", {{"k", result.params.k}, {"ks", result.params.ks}, {"kn", result.params.kn}}},
      {"sim",
       {{"dt", sim.dt},
        {"t_max", sim.t_max},
        {"eq_tol", sim.eq_tol},
        {"eq_window", sim.eq_window},
        {"record_stride", sim.record_stride},
        {"settle_time", sim.settle_time},
        {"readout_tol", sim.readout_tol},
        {"integrator", result.params.kn > 0.0 ? "euler-maruyama + rk4 settle" : "rk4"}}},
      {"master_seed", result.master_seed},
      {"n_trials", result.trials.size()},
      {"histogram", histogram},
      {"n_nonbinarized", result.n_nonbinarized},
      {"success_rate", result.success_rate},
      {"reference",
       {{"H", finite_or_null(result.reference_h)},
        {"exact", result.reference_exact},
        {"definition", result.reference_exact ? "exact ground-state energy by enumeration"
                                              : "best energy seen in campaign"}}},
      {"trials", trials},
  };
}

CampaignAggregates aggregates_of(const TrialCampaignResult& result) {
  return {result.trials.size(), result.histogram,      result.n_nonbinarized,
          result.success_rate,  result.reference_h,    result.reference_exact};
}

CampaignAggregates parse_campaign_report(const json& report) {
  CampaignAggregates agg;
  agg.n_trials = report.at("n_trials").get<std::size_t>();
  for (const auto& bin : report.at("histogram"))
    agg.histogram[bin.at("H").get<double>()] = bin.at("count").get<std::uint64_t>();
  agg.n_nonbinarized = report.at("n_nonbinarized").get<std::uint64_t>();
  agg.success_rate = report.at("success_rate").get<double>();
  const auto& ref = report.at("reference");
  agg.reference_h = ref.at("H").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : ref.at("H").get<double>();
  agg.reference_exact = ref.at("exact").get<bool>();
  return agg;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

}  // namespace

void write_report(const TrialCampaignResult& result, const RunMetadata& meta,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory '" + dir.string() + "': " + ec.message());

  const auto trials_path = dir / "trials.csv";
  auto trials = open_for_write(trials_path);
  write_trials_csv(trials, result);
  finish(trials, trials_path);

  const auto report_path = dir / "report.json";
  auto report = open_for_write(report_path);
  report << campaign_to_json(result, meta).dump(2) << '\n';
  finish(report, report_path);

  const auto info_path = dir / "run_info.txt";
  auto info = open_for_write(info_path);
  info << "timestamp " << meta.timestamp << '\n' << "tool_version " << meta.tool_version << '\n';
  finish(info, info_path);
}

std::string file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    hash ^= static_cast<unsigned char>(*it);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

}  // namespace oim
