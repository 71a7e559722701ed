#include "oim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "oim/dynamics.hpp"
#include "oim/enumeration.hpp"
#include "oim/errors.hpp"
#include "oim/experiments.hpp"
#include "oim/graph.hpp"
#include "oim/parallel.hpp"
#include "oim/random.hpp"
#include "oim/report.hpp"
#include "oim/self_check.hpp"
#include "oim/stability.hpp"

namespace oim {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  unsigned threads = 0;
  std::string graph;
  std::string out;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t seed = 0;
  bool full_count = false;
  bool ground_only = false;
  double k = 1.0;
  double ks = 0.0;
  double ks_min = 0.0;
  double ks_max = 0.0;
  double ks_step = 0.0;
  std::vector<double> ks_list;
  double kn = 0.005;
  std::size_t trials = 50;
  std::optional<double> dt;
  std::optional<double> t_max;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void require_k(double k) { require(std::isfinite(k) && k > 0.0, "--k must be positive"); }
void require_ks(double ks) {
  require(std::isfinite(ks) && ks >= 0.0, "--ks values must be non-negative");
}
void require_kn(double kn) { require(std::isfinite(kn) && kn >= 0.0, "--kn must be non-negative"); }

std::vector<double> ks_grid(double lo, double hi, double step) {
  require(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step), "K_s grid must be finite");
  require(lo >= 0.0, "--ks-min must be non-negative");
  require(step > 0.0, "--ks-step must be positive");
  require(hi >= lo, "empty K_s grid: --ks-max is below --ks-min");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

SimConfig sim_config(const Options& o) {
  SimConfig sim;
  if (o.dt) sim.dt = *o.dt;
  if (o.t_max) sim.t_max = *o.t_max;
  try {
    sim.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  return sim;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

void close_output(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw InputError("write failed for '" + path + "'");
}

struct LoadedGraph {
  Graph graph;
  CouplingMatrix w;
  std::string provenance;
};

LoadedGraph load(const std::string& path) {
  auto g = load_graph_file(path);
  auto w = coupling_from_graph(g);
  return {std::move(g), std::move(w), "file " + path + " fnv1a64 " + file_fingerprint(path)};
}

std::vector<ConfigIndex> all_ground_indices(const CouplingMatrix& w, unsigned threads) {
  return ground_states(w, std::numeric_limits<std::size_t>::max(), threads).indices;
}

int cmd_gen(const Options& o, std::ostream& out) {
  require(o.nodes >= 1, "--nodes must be at least 1");
  require(o.edges <= max_edge_count(o.nodes),
          "--edges " + std::to_string(o.edges) + " exceeds n(n-1)/2 = " +
              std::to_string(max_edge_count(o.nodes)));
  const auto g = generate_random_graph(o.nodes, o.edges, o.seed);
  auto file = open_output(o.out);
  file << "# random graph n=" << o.nodes << " m=" << o.edges << " seed=" << o.seed
       << " prng=std::mt19937_64\n";
  write_graph(file, g);
  close_output(file, o.out);
  out << "wrote " << o.out << ": nodes " << g.num_nodes() << " edges " << g.num_edges()
      << " sum_weight " << format_energy(g.total_weight()) << " density "
      << format_real(g.density()) << '\n';
  return kExitOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const auto in = load(o.graph);
  require_exhaustive_size(in.w.size());
  const auto hist = enumerate_energies(in.w, o.full_count, o.threads);
  const auto ground = ground_states(in.w, 0, o.threads);
  auto file = open_output(o.out);
  write_histogram_csv(file, hist);
  close_output(file, o.out);
  out << "min H " << format_energy(ground.min_energy) << '\n'
      << "ground states: " << ground.total << " configurations (" << ground.representatives
      << " up to global spin flip)\n"
      << "maxcut " << format_energy(maxcut_from_energy(in.graph, ground.min_energy)) << '\n';
  return kExitOk;
}

int cmd_stability(const Options& o, std::ostream& out) {
  require_k(o.k);
  const auto grid = ks_grid(o.ks_min, o.ks_max, o.ks_step);
  const auto in = load(o.graph);
  require_exhaustive_size(in.w.size());
  const auto spectra = o.ground_only ? config_spectra(in.w, all_ground_indices(in.w, o.threads))
                                     : landscape_spectra(in.w, o.threads);
  auto file = open_output(o.out);
  write_sweep_header(file);
  for (const auto& c : spectra)
    for (double ks : grid) write_sweep_row(file, {c.index, c.h, ks, o.k * c.beta_max - 2.0 * ks});
  close_output(file, o.out);
  out << "wrote " << spectra.size() * grid.size() << " rows (" << spectra.size()
      << " configurations x " << grid.size() << " K_s values)\n";
  return kExitOk;
}

int cmd_levels(const Options& o, std::ostream& out) {
  require_k(o.k);
  require_ks(o.ks);
  const auto in = load(o.graph);
  require_exhaustive_size(in.w.size());
  const auto levels = energy_level_stats(in.w, o.k, o.ks, o.threads);
  auto file = open_output(o.out);
  write_levels_csv(file, levels);
  close_output(file, o.out);
  const auto& ground = levels.front();
  out << "ground level H " << format_energy(ground.h) << ": " << ground.n_stable << " of "
      << ground.count << " stable, lambda_L in [" << format_real(ground.lambda_min) << ", "
      << format_real(ground.lambda_max) << "]\n";
  std::uint64_t stable = 0;
  for (const auto& l : levels) stable += l.n_stable;
  out << "stable configurations: " << stable << '\n';
  return kExitOk;
}

int cmd_critical(const Options& o, std::ostream& out) {
  require_k(o.k);
  const auto in = load(o.graph);
  require_exhaustive_size(in.w.size());
  const auto ground = all_ground_indices(in.w, o.threads);
  const auto spectra =
      o.ground_only ? config_spectra(in.w, ground) : landscape_spectra(in.w, o.threads);
  auto file = open_output(o.out);
  write_critical_csv(file, spectra, o.k);
  close_output(file, o.out);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : config_spectra(in.w, ground)) {
    lo = std::min(lo, o.k * c.beta_max / 2.0);
    hi = std::max(hi, o.k * c.beta_max / 2.0);
  }
  out << "ground-state critical K_s: min " << format_real(lo) << " max " << format_real(hi)
      << '\n';
  return kExitOk;
}

int cmd_trace(const Options& o, std::ostream& out) {
  require_k(o.k);
  require_ks(o.ks);
  require_kn(o.kn);
  auto sim = sim_config(o);
  const auto in = load(o.graph);
  const OimParams p{o.k, o.ks, o.kn};
  Rng rng = Rng::stream(o.seed, 0);
  const auto theta0 = random_phases(in.w.size(), rng);

  Trajectory traj;
  std::optional<std::string> failure;
  try {
    traj = integrate(in.w, p, theta0, sim, o.kn > 0.0 ? &rng : nullptr);
  } catch (const IntegrationError& e) {
    traj = e.partial();
    failure = e.what();
  }
  auto file = open_output(o.out);
  write_trace_csv(file, traj);
  close_output(file, o.out);

  const auto result = readout(traj.final_state(), sim.readout_tol);
  nlohmann::json footer = {
      {"metadata",
       {{"tool_version", kToolVersion},
        {"prng", kPrngIdentity},
        {"graph", in.provenance},
        {"parameters",
         {{"k", o.k}, {"ks", o.ks}, {"kn", o.kn}, {"seed", o.seed}, {"dt", sim.dt},
          {"t_max", sim.t_max}, {"eq_tol", sim.eq_tol}, {"eq_window", sim.eq_window},
          {"record_stride", sim.record_stride}, {"readout_tol", sim.readout_tol}}}}},
      {"steps", traj.steps},
      {"reached_equilibrium", traj.reached_equilibrium},
      {"readout", readout_to_json(result)}};
  out << "steps " << traj.steps << '\n';
  if (const auto* b = std::get_if<Binarized>(&result)) {
    const double h = ising_energy(in.w, b->spins);
    const double lambda = largest_lyapunov(in.w, p, b->spins);
    footer["H"] = h;
    footer["lambda_L"] = lambda;
    out << "readout binarized H " << format_energy(h) << " lambda_L " << format_real(lambda)
        << '\n';
  } else {
    out << "readout non-binarized, worst deviation "
        << format_real(std::get<NonBinarized>(result).worst_deviation) << " rad\n";
  }
  if (failure) footer["failure"] = *failure;
  const auto json_path = o.out + ".json";
  auto json_file = open_output(json_path);
  json_file << footer.dump(2) << '\n';
  close_output(json_file, json_path);
  if (failure) throw NumericalError(*failure);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  require_k(o.k);
  require_kn(o.kn);
  require(!o.ks_list.empty(), "--ks needs at least one value");
  for (double ks : o.ks_list) require_ks(ks);
  require(o.trials >= 1, "--trials must be at least 1");
  const auto sim = sim_config(o);
  const auto in = load(o.graph);

  const auto campaigns =
      ks_campaign(in.w, o.k, o.kn, o.ks_list, sim, o.trials, o.seed, o.threads);
  for (const auto& c : campaigns) {
    const auto dir = std::filesystem::path(o.out) / ("ks_" + format_real(c.params.ks));
    const auto meta = make_metadata(
        in.provenance, {{"k", o.k}, {"ks", c.params.ks}, {"kn", o.kn}, {"trials", o.trials},
                        {"seed", o.seed}, {"ks_values", o.ks_list}});
    write_report(c, meta, dir);
    out << "K_s " << format_real(c.params.ks) << ": success_rate " << format_real(c.success_rate)
        << " (reference H " << format_energy(c.reference_h) << "), non-binarized "
        << c.n_nonbinarized << " of " << c.trials.size() << '\n';
    for (const auto& [h, count] : c.histogram)
      out << "  H " << format_energy(h) << ": " << count << '\n';
  }
  return kExitOk;
}

std::vector<std::pair<std::string, Graph>> builtin_graphs() {
  return {
      {"single-edge", Graph(2, {{0, 1, 1.0}})},
      {"triangle", Graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}})},
      {"K4", generate_random_graph(4, 6, 1)},
      {"random-8-14", generate_random_graph(8, 14, 1)},
  };
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, Graph>> graphs;
  if (o.graph.empty()) {
    graphs = builtin_graphs();
  } else {
    graphs.emplace_back(o.graph, load_graph_file(o.graph));
  }
  for (const auto& [name, g] : graphs) {
    const auto w = coupling_from_graph(g);
    for (const auto& check : run_self_checks(w, 2024)) {
      out << (check.passed ? "PASS " : "FAIL ") << name << ' ' << check.name << ": "
          << check.detail << '\n';
      if (!check.passed) {
        err << "verification failed: " << check.name << " on " << name << '\n';
        return kExitVerification;
      }
    }
  }
  out << "all checks passed\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Oscillator Ising machine landscape, stability and dynamics toolkit", "oimctl"};
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* gen = app.add_subcommand("gen", "Generate a random unweighted graph");
  gen->add_option("--nodes", o.nodes)->required();
  gen->add_option("--edges", o.edges)->required();
  gen->add_option("--seed", o.seed)->required();
  gen->add_option("--out", o.out)->required();

  auto* enumerate = app.add_subcommand("enumerate", "Energy histogram over all configurations");
  enumerate->add_option("graph", o.graph)->required();
  enumerate->add_option("--out", o.out)->required();
  enumerate->add_flag("--full-count", o.full_count, "Count mirror images separately");

  auto* stability = app.add_subcommand("stability", "lambda_L as a function of K_s");
  stability->add_option("graph", o.graph)->required();
  stability->add_option("--k", o.k);
  stability->add_option("--ks-min", o.ks_min)->required();
  stability->add_option("--ks-max", o.ks_max)->required();
  stability->add_option("--ks-step", o.ks_step)->required();
  stability->add_flag("--ground-only", o.ground_only);
  stability->add_option("--out", o.out)->required();

  auto* levels = app.add_subcommand("levels", "Per-energy min/max lambda_L at one K_s");
  levels->add_option("graph", o.graph)->required();
  levels->add_option("--k", o.k);
  levels->add_option("--ks", o.ks)->required();
  levels->add_option("--out", o.out)->required();

  auto* critical = app.add_subcommand("critical-ks", "Critical injection strength per config");
  critical->add_option("graph", o.graph)->required();
  critical->add_option("--k", o.k);
  critical->add_flag("--ground-only", o.ground_only);
  critical->add_option("--out", o.out)->required();

  auto* trace = app.add_subcommand("trace", "Integrate one trajectory");
  trace->add_option("graph", o.graph)->required();
  trace->add_option("--k", o.k);
  trace->add_option("--ks", o.ks)->required();
  trace->add_option("--kn", o.kn);
  trace->add_option("--seed", o.seed)->required();
  trace->add_option("--dt", o.dt);
  trace->add_option("--t-max", o.t_max);
  trace->add_option("--out", o.out)->required();

  auto* simulate = app.add_subcommand("simulate", "Multi-trial campaign per K_s");
  simulate->add_option("graph", o.graph)->required();
  simulate->add_option("--k", o.k);
  simulate->add_option("--ks", o.ks_list)->required()->delimiter(',');
  simulate->add_option("--kn", o.kn);
  simulate->add_option("--trials", o.trials);
  simulate->add_option("--seed", o.seed)->required();
  simulate->add_option("--dt", o.dt);
  simulate->add_option("--t-max", o.t_max);
  simulate->add_option("--out", o.out)->required();

  auto* verify = app.add_subcommand("verify", "Run numerical self-checks");
  verify->add_option("graph", o.graph);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.threads = resolve_threads(o.threads);

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (enumerate->parsed()) return cmd_enumerate(o, out);
    if (stability->parsed()) return cmd_stability(o, out);
    if (levels->parsed()) return cmd_levels(o, out);
    if (critical->parsed()) return cmd_critical(o, out);
    if (trace->parsed()) return cmd_trace(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (verify->parsed()) return cmd_verify(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace oim
