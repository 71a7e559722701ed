#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oim/experiments.hpp"
#include "oim/report.hpp"

using namespace oim;

namespace {

Graph single_edge() { return Graph(2, {{0, 1, 1.0}}); }
Graph triangle() { return Graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}); }

std::filesystem::path scratch_dir(const std::string& name) {
  const char* base = std::getenv("OIM_TEST_TMP");
  auto dir = std::filesystem::path(base ? base : std::filesystem::temp_directory_path().string()) /
             ("experiments_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_trials(const TrialCampaignResult& a, const TrialCampaignResult& b) {
  if (a.trials.size() != b.trials.size()) return false;
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    const auto& x = a.trials[i];
    const auto& y = b.trials[i];
    if (x.seed != y.seed || x.converged != y.converged || x.h != y.h ||
        x.final_lambda_l != y.final_lambda_l || x.steps != y.steps ||
        is_binarized(x.readout) != is_binarized(y.readout))
      return false;
  }
  return a.histogram == b.histogram && a.n_nonbinarized == b.n_nonbinarized &&
         a.success_rate == b.success_rate;
}

// Graph with non-degenerate ground critical values, and a K_s between them.
struct BiasedSetup {
  CouplingMatrix w;
  double ks;
};

BiasedSetup biased_setup(std::size_t n, std::size_t m) {
  for (std::uint64_t seed = 1;; ++seed) {
    auto w = coupling_from_graph(generate_random_graph(n, m, seed));
    const auto ground = ground_states(w, 1u << 12, 1);
    double lo = 1e300, hi = -1e300;
    for (const auto& s : ground.configs) {
      const double c = critical_ks(w, s, 1.0);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    if (hi - lo > 0.2) return {std::move(w), 0.5 * (lo + hi)};
  }
}

}  // namespace

TEST_CASE("triangle at K_s 0.8 always lands on the ground level") {
  const auto w = coupling_from_graph(triangle());
  const auto r = run_trials(w, OimParams{1.0, 0.8, 0.005}, SimConfig{}, 50, 2024);
  CHECK(r.histogram == std::map<double, std::uint64_t>{{-1.0, 50}});
  CHECK(r.n_nonbinarized == 0);
  CHECK(r.success_rate == 1.0);
  CHECK(r.reference_exact);
  CHECK(r.reference_h == -1.0);
  for (const auto& t : r.trials) {
    CHECK(t.converged);
    REQUIRE(t.final_lambda_l);
    CHECK(*t.final_lambda_l == doctest::Approx(-0.6));
  }
}

TEST_CASE("single edge deterministic trials cut the edge") {
  const auto w = coupling_from_graph(single_edge());
  const auto r = run_trials(w, OimParams{1.0, 0.5, 0.0}, SimConfig{}, 10, 8);
  CHECK(r.histogram == std::map<double, std::uint64_t>{{-1.0, 10}});
  CHECK(r.success_rate == 1.0);
  for (const auto& t : r.trials) {
    CHECK(t.converged);
    CHECK(is_binarized(t.readout));
  }
}

TEST_CASE("campaigns are deterministic and independent of thread count") {
  const auto w = coupling_from_graph(generate_random_graph(7, 11, 3));
  const OimParams p{1.0, 0.9, 0.005};
  SimConfig sim;
  sim.t_max = 50.0;
  const auto a = run_trials(w, p, sim, 12, 99, 1);
  const auto b = run_trials(w, p, sim, 12, 99, 1);
  const auto c = run_trials(w, p, sim, 12, 99, 4);
  CHECK(same_trials(a, b));
  CHECK(same_trials(a, c));
}

TEST_CASE("ks_campaign") {
  const auto w = coupling_from_graph(triangle());
  SimConfig sim;
  const auto runs = ks_campaign(w, 1.0, 0.005, {0.1, 0.8}, sim, 20, 5);
  REQUIRE(runs.size() == 2);
  SUBCASE("trial streams are paired across K_s") {
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(runs[0].trials[i].seed == runs[1].trials[i].seed);
      CHECK(trial_initial_state(3, 5, i) == trial_initial_state(3, 5, i));
    }
  }
  SUBCASE("weak injection leaves the triangle unbinarized") {
    CHECK(runs[0].n_nonbinarized == 20);
    CHECK(runs[0].histogram.empty());
    CHECK(runs[0].success_rate == 0.0);
    CHECK(runs[1].histogram == std::map<double, std::uint64_t>{{-1.0, 20}});
  }
  SUBCASE("single value matches run_trials") {
    const auto single = ks_campaign(w, 1.0, 0.005, {0.8}, sim, 20, 5);
    CHECK(same_trials(single.front(), run_trials(w, OimParams{1.0, 0.8, 0.005}, sim, 20, 5)));
  }
  CHECK_THROWS_AS(ks_campaign(w, 1.0, 0.005, {}, sim, 20, 5), InputError);
  CHECK_THROWS_AS(run_trials(w, OimParams{1.0, 0.8, 0.0}, sim, 0, 5), InputError);
}

TEST_CASE("stable_set_report") {
  const auto t = coupling_from_graph(triangle());
  SUBCASE("only ground states at 0.8") {
    const auto r = stable_set_report(t, 1.0, 0.8, 100);
    CHECK(r.total_stable == 3);
    CHECK_FALSE(r.truncated);
    for (const auto& rec : r.records) {
      CHECK(rec.h == -1.0);
      CHECK(rec.stable);
    }
  }
  SUBCASE("everything at 1.6") {
    const auto r = stable_set_report(t, 1.0, 1.6, 100);
    CHECK(r.total_stable == 4);
    CHECK(r.records.back().h == 3.0);
    CHECK(r.records.back().lambda_l == doctest::Approx(3.0 - 3.2));
  }
  SUBCASE("truncation is flagged with the full count") {
    const auto r = stable_set_report(t, 1.0, 1.6, 2);
    CHECK(r.records.size() == 2);
    CHECK(r.total_stable == 4);
    CHECK(r.truncated);
  }
  SUBCASE("just above the largest threshold every representative is stable") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const std::size_t n = 4 + seed;
      const auto w = coupling_from_graph(generate_random_graph(n, 2 * n, seed));
      double top = 0.0;
      for (const auto& c : landscape_spectra(w, 1)) top = std::max(top, c.beta_max / 2);
      CHECK(stable_set_report(w, 1.0, top + 1e-6, 1u << 12).total_stable ==
            num_representatives(n));
    }
  }
}

TEST_CASE("campaign consistency and bias") {
  const auto setup = biased_setup(8, 10);
  const auto& w = setup.w;
  const OimParams p{1.0, setup.ks, 0.005};
  const auto stable = stable_set_report(w, 1.0, setup.ks, 1u << 12);
  std::set<ConfigIndex> stable_set;
  for (const auto& rec : stable.records) stable_set.insert(rec.config);
  const auto ground = ground_states(w, 1u << 12, 1);
  std::size_t excluded = 0;
  for (auto idx : ground.indices) excluded += stable_set.count(idx) == 0;
  REQUIRE(excluded > 0);

  const auto r = run_trials(w, p, SimConfig{}, 40, 17);
  std::uint64_t mass = r.n_nonbinarized;
  for (const auto& [h, c] : r.histogram) mass += c;
  CHECK(mass == 40);
  CHECK(r.success_rate >= 0.0);
  CHECK(r.success_rate <= 1.0);
  for (const auto& t : r.trials) {
    if (!is_binarized(t.readout)) continue;
    const auto& spins = std::get<Binarized>(t.readout).spins;
    REQUIRE(t.h);
    CHECK(*t.h == ising_energy(w, spins));
    if (t.converged) {
      CHECK(*t.final_lambda_l < 0.0);
      CHECK(stable_set.count(config_to_index(spins)) == 1);
    }
  }
}

TEST_CASE("write_report round-trips aggregates") {
  const auto w = coupling_from_graph(generate_random_graph(6, 9, 4));
  SimConfig sim;
  sim.t_max = 40.0;
  const auto r = run_trials(w, OimParams{1.0, 1.2, 0.005}, sim, 8, 3);
  const auto meta = make_metadata("generator seed 4", nlohmann::json{{"k", 1.0}});
  const auto dir = scratch_dir("roundtrip");
  write_report(r, meta, dir);
  const auto parsed = parse_campaign_report(nlohmann::json::parse(slurp(dir / "report.json")));
  CHECK(parsed == aggregates_of(r));

  std::istringstream csv(slurp(dir / "trials.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "trial,seed,converged,binarized,H,lambda_L,steps");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 8);

  SUBCASE("rewriting is byte-identical") {
    const auto first = slurp(dir / "report.json");
    write_report(r, make_metadata("generator seed 4", nlohmann::json{{"k", 1.0}}), dir);
    CHECK(slurp(dir / "report.json") == first);
  }
}

TEST_CASE("write_report with no binarized trials") {
  const auto w = coupling_from_graph(triangle());
  const auto r = run_trials(w, OimParams{1.0, 0.1, 0.005}, SimConfig{}, 5, 1);
  REQUIRE(r.n_nonbinarized == 5);
  const auto dir = scratch_dir("empty");
  write_report(r, make_metadata("triangle", nlohmann::json::object()), dir);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report.at("histogram").empty());
  CHECK(report.at("n_nonbinarized") == 5);
  CHECK(parse_campaign_report(report) == aggregates_of(r));
}

TEST_CASE("write_report reports unwritable destinations") {
  const auto w = coupling_from_graph(single_edge());
  const auto r = run_trials(w, OimParams{1.0, 0.5, 0.0}, SimConfig{}, 1, 1);
  const auto dir = scratch_dir("blocked");
  std::filesystem::create_directories(dir.parent_path());
  std::ofstream(dir) << "not a directory";
  CHECK_THROWS_AS(write_report(r, make_metadata("edge", {}), dir), InputError);
  std::filesystem::remove(dir);
}
