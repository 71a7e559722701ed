#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oim/dynamics.hpp"
#include "oim/enumeration.hpp"
#include "oim/stability.hpp"

using namespace oim;

namespace {

constexpr double pi = std::numbers::pi;

Graph single_edge() { return Graph(2, {{0, 1, 1.0}}); }
Graph triangle() { return Graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}); }

double angular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * pi);
  return std::min(d, 2 * pi - d);
}

double max_distance(const PhaseState& a, const PhaseState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, angular_distance(a[i], b[i]));
  return m;
}

PhaseState perturbed(const PhaseState& th, double radius, Rng& rng) {
  std::vector<double> out(th.values().begin(), th.values().end());
  for (double& x : out) x += radius * (2 * rng.uniform() - 1);
  return PhaseState(std::move(out));
}

}  // namespace

TEST_CASE("VelocityField agrees with phase_velocity") {
  Rng rng(1);
  const auto w = coupling_from_graph(generate_random_graph(9, 20, 2));
  const OimParams p{1.2, 0.7, 0.0};
  VelocityField field(w, p);
  std::vector<double> out(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto th = random_phases(9, rng);
    field.evaluate(th.values(), out);
    const auto ref = phase_velocity(w, p, th);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(out[i] - ref[i]) <= 1e-12);
  }
}

TEST_CASE("step_deterministic") {
  const auto w = coupling_from_graph(single_edge());
  const OimParams p{1.0, 1.0, 0.0};
  SUBCASE("binarized states do not move") {
    const PhaseState th({0.0, pi});
    const auto next = step_deterministic(w, p, th, 0.01);
    CHECK(max_distance(next, th) <= 1e-15);
  }
  SUBCASE("energy decreases") {
    const PhaseState th({0.0, pi / 2});
    const auto next = step_deterministic(w, p, th, 0.01);
    CHECK(lyapunov_energy(w, p, next) < lyapunov_energy(w, p, th));
  }
  SUBCASE("local error scales as dt^5") {
    const auto g = coupling_from_graph(generate_random_graph(5, 7, 3));
    const OimParams q{1.0, 0.7, 0.0};
    Rng rng(4);
    const auto th = random_phases(5, rng);
    auto error = [&](double dt) {
      PhaseState fine = th;
      for (int i = 0; i < 1000; ++i) fine = step_deterministic(g, q, fine, dt / 1000);
      const auto coarse = step_deterministic(g, q, th, dt);
      double e = 0.0;
      for (std::size_t i = 0; i < 5; ++i) e = std::max(e, std::abs(coarse[i] - fine[i]));
      return e;
    };
    const double ratio = error(0.2) / error(0.1);
    CHECK(ratio > 20.0);
    CHECK(ratio < 45.0);
  }
  CHECK_THROWS_AS(step_deterministic(w, p, PhaseState({0.0, 1.0}), 0.0), InputError);
}

TEST_CASE("step_sde") {
  const auto w = coupling_from_graph(triangle());
  SUBCASE("zero noise is an explicit Euler step") {
    Rng rng(1);
    const PhaseState th({0.3, 1.1, 2.0});
    const OimParams p{1.0, 0.8, 0.0};
    const auto next = step_sde(w, p, th, 0.01, rng);
    const auto f = phase_velocity(w, p, th);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(next[i] - (th[i] + 0.01 * f[i])) <= 1e-15);
  }
  SUBCASE("fixed seed gives the same step") {
    const PhaseState th({0.3, 1.1, 2.0});
    const OimParams p{1.0, 0.8, 0.05};
    Rng a(9), b(9);
    CHECK(step_sde(w, p, th, 0.01, a) == step_sde(w, p, th, 0.01, b));
  }
  SUBCASE("increment variance is K_n^2 dt") {
    const PhaseState th({0.3, 1.1, 2.0});
    const OimParams p{1.0, 0.8, 0.005};
    const double dt = 0.01;
    const auto f = phase_velocity(w, p, th);
    Rng rng(77);
    constexpr int samples = 100000;
    std::vector<double> sum(3, 0.0), sum_sq(3, 0.0);
    for (int k = 0; k < samples; ++k) {
      const auto next = step_sde(w, p, th, dt, rng);
      for (std::size_t i = 0; i < 3; ++i) {
        const double x = next[i] - th[i] - f[i] * dt;
        sum[i] += x;
        sum_sq[i] += x * x;
      }
    }
    const double expected = p.kn * p.kn * dt;
    for (std::size_t i = 0; i < 3; ++i) {
      const double mean = sum[i] / samples;
      const double var = sum_sq[i] / samples - mean * mean;
      CHECK(std::abs(var - expected) <= 0.05 * expected);
    }
  }
}

TEST_CASE("integrate deterministic") {
  SimConfig sim;
  SUBCASE("stable binarized start terminates at once without moving") {
    const auto t = coupling_from_graph(triangle());
    const PhaseState th({0.0, 0.0, pi});
    const auto traj = integrate(t, OimParams{1.0, 0.8, 0.0}, th, sim, nullptr);
    CHECK(traj.reached_equilibrium);
    CHECK(traj.steps < sim.eq_window);
    CHECK(traj.times.front() == 0.0);
    CHECK(max_distance(traj.final_state(), th) <= 1e-12);
  }
  SUBCASE("triangle converges to a ground state") {
    const auto t = coupling_from_graph(triangle());
    const OimParams p{1.0, 0.8, 0.0};
    const auto traj = integrate(t, p, PhaseState({0.3, -0.4, pi + 0.5}), sim, nullptr);
    CHECK(traj.reached_equilibrium);
    const auto r = readout(traj.final_state(), 0.1);
    REQUIRE(is_binarized(r));
    CHECK(ising_energy(t, std::get<Binarized>(r).spins) == -1.0);
    CHECK(energy_trace(traj).pass);
  }
  SUBCASE("weak injection still binarizes the single edge") {
    const auto e = coupling_from_graph(single_edge());
    const OimParams p{1.0, 0.05, 0.0};
    const auto traj = integrate(e, p, PhaseState({0.7, 2.9}), sim, nullptr);
    CHECK(traj.reached_equilibrium);
    CHECK(is_equilibrium(e, p, traj.final_state(), 1e-6));
    const auto r = readout(traj.final_state(), 0.1);
    REQUIRE(is_binarized(r));
    CHECK(std::get<Binarized>(r).spins[0] == -std::get<Binarized>(r).spins[1]);
  }
  SUBCASE("trajectory bookkeeping") {
    const auto w = coupling_from_graph(generate_random_graph(6, 8, 1));
    SimConfig short_run;
    short_run.t_max = 1.0;
    short_run.record_stride = 7;
    Rng rng(3);
    const auto traj = integrate(w, OimParams{1.0, 0.1, 0.0}, random_phases(6, rng), short_run,
                                nullptr);
    CHECK(traj.times.size() == traj.states.size());
    CHECK(traj.energies.size() == traj.states.size());
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.steps == 100);
    CHECK(traj.times.back() == doctest::Approx(1.0));
  }
}

TEST_CASE("integrate reports non-finite states with the partial trajectory") {
  const auto e = coupling_from_graph(single_edge());
  SimConfig sim;
  sim.dt = 1e300;
  sim.t_max = 1e301;
  try {
    integrate(e, OimParams{1e10, 0.0, 0.0}, PhaseState({0.0, 1.0}), sim, nullptr);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& err) {
    CHECK(err.step() >= 1);
    CHECK_FALSE(err.partial().states.empty());
  }
}

TEST_CASE("integrate noisy runs to t_max and is seed-deterministic") {
  const auto w = coupling_from_graph(generate_random_graph(7, 12, 5));
  SimConfig sim;
  sim.t_max = 5.0;
  const OimParams p{1.0, 0.9, 0.005};
  Rng r0(5);
  const auto th0 = random_phases(7, r0);
  Rng a(123), b(123);
  const auto ta = integrate(w, p, th0, sim, &a);
  const auto tb = integrate(w, p, th0, sim, &b);
  CHECK(ta.steps == 500);
  CHECK_FALSE(ta.reached_equilibrium);
  CHECK(ta.states == tb.states);
  CHECK(ta.energies == tb.energies);
  const auto report = energy_trace(ta);
  CHECK(report.max_increase >= 0.0);
}

TEST_CASE("readout") {
  SUBCASE("exact lattice") {
    const auto r = readout(PhaseState({0.0, pi}), 0.1);
    REQUIRE(is_binarized(r));
    CHECK(std::get<Binarized>(r).spins == SpinConfig({1, -1}));
  }
  SUBCASE("wrap-around") {
    const auto r = readout(PhaseState({6.28, 3.10}), 0.1);
    REQUIRE(is_binarized(r));
    CHECK(std::get<Binarized>(r).spins == SpinConfig({1, -1}));
    const auto neg = readout(PhaseState({-0.05, -3.1, 3 * pi + 0.02}), 0.1);
    REQUIRE(is_binarized(neg));
    CHECK(std::get<Binarized>(neg).spins == SpinConfig({1, -1, -1}));
  }
  SUBCASE("off lattice") {
    const auto r = readout(PhaseState({0.0, pi / 2}), 0.1);
    REQUIRE_FALSE(is_binarized(r));
    CHECK(std::get<NonBinarized>(r).worst_deviation == doctest::Approx(pi / 2));
  }
  CHECK_THROWS_AS(readout(PhaseState({0.0}), 0.0), InputError);
  CHECK_THROWS_AS(readout(PhaseState({0.0}), 1.0), InputError);
}

TEST_CASE("energy_trace") {
  Trajectory constant;
  for (int i = 0; i < 5; ++i) {
    constant.times.push_back(i);
    constant.states.push_back(PhaseState({0.0}));
    constant.energies.push_back(-3.0);
  }
  const auto r = energy_trace(constant);
  CHECK(r.max_increase == 0.0);
  CHECK(r.pass);

  Trajectory rising = constant;
  rising.energies[3] = -2.0;
  CHECK_FALSE(energy_trace(rising).pass);
}

TEST_CASE("dissipation along deterministic trajectories") {
  Rng rng(31);
  SimConfig sim;
  sim.t_max = 30.0;
  sim.record_stride = 1;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(9);
    const auto w =
        coupling_from_graph(generate_random_graph(n, rng.uniform_index(max_edge_count(n) + 1), trial));
    const auto traj =
        integrate(w, OimParams{1.0, 2 * rng.uniform(), 0.0}, random_phases(n, rng), sim, nullptr);
    CHECK(energy_trace(traj).pass);
  }
}

TEST_CASE("stable configurations attract nearby starts") {
  const auto w = coupling_from_graph(generate_random_graph(8, 14, 6));
  const OimParams p{1.0, 1.5, 0.0};
  Rng rng(2);
  int checked = 0;
  for (ConfigIndex i = 0; i < num_representatives(8); ++i) {
    const auto s = index_to_config(i, 8);
    if (largest_lyapunov(w, p, s) >= -0.1) continue;
    const auto traj = integrate(w, p, perturbed(PhaseState::from_spins(s), 0.05, rng), SimConfig{},
                                nullptr);
    const auto r = readout(traj.final_state(), 0.1);
    REQUIRE(is_binarized(r));
    CHECK(std::get<Binarized>(r).spins == s);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("noise drives trajectories away from unstable configurations") {
  const auto w = coupling_from_graph(generate_random_graph(8, 14, 6));
  const OimParams p{1.0, 0.6, 0.005};
  SimConfig sim;
  sim.t_max = 200.0;
  sim.record_stride = 10;
  int tested = 0;
  for (ConfigIndex i = 0; i < num_representatives(8) && tested < 5; i += 11) {
    const auto s = index_to_config(i, 8);
    if (largest_lyapunov(w, p, s) <= 0.1) continue;
    ++tested;
    const auto center = PhaseState::from_spins(s);
    int escaped = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed * 1000 + i);
      const auto traj = integrate(w, p, perturbed(center, 0.05, rng), sim, &rng);
      for (const auto& st : traj.states)
        if (max_distance(st, center) > 0.2) {
          ++escaped;
          break;
        }
    }
    CHECK(escaped >= 18);
  }
  CHECK(tested > 0);
}
