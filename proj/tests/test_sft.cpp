#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "helpers.hpp"
#include "thurston/sft.hpp"

using namespace thurston;
using namespace testutil;

TEST_CASE("build_subshift accepts the smallest subshifts") {
  SubshiftGraph loop({"a"}, {{0, 0}});
  CHECK(loop.num_states() == 1);
  CHECK(loop.num_edges() == 1);

  SubshiftGraph two = full_shift(2);
  CHECK(two.num_edges() == 4);
  CHECK(two.edge_between(0, 1) >= 0);
}

TEST_CASE("build_subshift rejects invalid graphs") {
  CHECK_THROWS_WITH_AS(SubshiftGraph({"1", "2"}, {{0, 1}}),
                       doctest::Contains("DanglingState"), Error);
  // Both states have in and out edges but there is no return path to 1.
  CHECK_THROWS_AS(SubshiftGraph({"1", "2"}, {{0, 0}, {0, 1}, {1, 1}}), Error);
  try {
    SubshiftGraph({"1", "2"}, {{0, 0}, {0, 1}, {1, 1}});
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_irreducible);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
  CHECK_THROWS_AS(SubshiftGraph({"1", "2"}, {{0, 1}, {0, 1}, {1, 0}}), Error);
  try {
    SubshiftGraph({"1", "2"}, {{0, 1}, {0, 1}, {1, 0}});
  } catch (const Error& e) {
    CHECK(e.code() == errc::duplicate_edge);
  }
}

TEST_CASE("topological entropy of basic shifts") {
  CHECK(topological_entropy(full_shift(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(topological_entropy(cycle_graph(3))) <= 1e-12);

  // Independent oracle: the golden mean entropy is the log of the largest
  // root of x^2 = x + 1, from the characteristic polynomial of [[1,1],[1,0]].
  double root = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(topological_entropy(golden_mean()) ==
        doctest::Approx(std::log(root)).epsilon(1e-12));
}

TEST_CASE("pressure: constants and an explicit 2x2 oracle") {
  SubshiftGraph two = full_shift(2);
  CHECK(pressure(two, constant_potential(two, 0.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(pressure(two, constant_potential(two, 0.5)) ==
        doctest::Approx(std::log(2.0) + 0.5).epsilon(1e-12));

  SubshiftGraph gm = golden_mean();
  EdgePotential f = constant_potential(gm, 0.0);
  f[gm.edge_between(0, 0)] = 1.0;
  // Oracle: largest eigenvalue of [[e,1],[1,0]] by the quadratic formula.
  double e = std::exp(1.0);
  double oracle = 0.5 * (e + std::sqrt(e * e + 4.0));
  CHECK(pressure(gm, f) == doctest::Approx(std::log(oracle)).epsilon(1e-12));
}

TEST_CASE("pressure constant-shift identity on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    SubshiftGraph g = random_graph(rng, 2 + static_cast<int>(rng() % 6));
    EdgePotential f = random_potential(rng, g);
    double c = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    double lhs = pressure(g, add(f, constant_potential(g, c)));
    CHECK(lhs == doctest::Approx(pressure(g, f) + c).epsilon(1e-10));
  }
}

TEST_CASE("equilibrium measure: maximal entropy and Parry examples") {
  SubshiftGraph two = full_shift(2);
  MarkovMeasure m = equilibrium_measure(two, constant_potential(two, 0.0));
  validate_measure(two, m);
  for (int e = 0; e < 4; ++e)
    CHECK(m.edge_frequencies[e] == doctest::Approx(0.25).epsilon(1e-10));

  SubshiftGraph tri = cycle_graph(3);
  std::mt19937_64 rng(3);
  MarkovMeasure mc = equilibrium_measure(tri, random_potential(rng, tri));
  validate_measure(tri, mc);
  for (int e = 0; e < 3; ++e)
    CHECK(mc.edge_frequencies[e] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  // Parry measure of the golden mean shift: eigenvector oracle with
  // phi = (1+sqrt 5)/2 for the symmetric matrix [[1,1],[1,0]].
  SubshiftGraph gm = golden_mean();
  MarkovMeasure mp = equilibrium_measure(gm, constant_potential(gm, 0.0));
  validate_measure(gm, mp);
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  double w1 = phi * phi / (phi * phi + 1.0);
  CHECK(mp.state_weights[0] == doctest::Approx(w1).epsilon(1e-10));
  CHECK(mp.edge_probs[gm.edge_between(0, 0)] ==
        doctest::Approx(1.0 / phi).epsilon(1e-10));
  CHECK(mp.edge_probs[gm.edge_between(0, 1)] ==
        doctest::Approx(1.0 / (phi * phi)).epsilon(1e-10));
  CHECK(mp.edge_probs[gm.edge_between(1, 0)] == doctest::Approx(1.0));
}

TEST_CASE("variational identity h + int f = P(f)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SubshiftGraph g = random_graph(rng, 2 + static_cast<int>(rng() % 5));
    EdgePotential f = random_potential(rng, g);
    MarkovMeasure m = equilibrium_measure(g, f);
    validate_measure(g, m);
    CHECK(markov_entropy(m) + integrate(m, f) ==
          doctest::Approx(pressure(g, f)).epsilon(1e-9));
  }
}

TEST_CASE("cycle means never exceed pressure, equilibrium attains it") {
  std::mt19937_64 rng(13);
  SubshiftGraph g = random_graph(rng, 4);
  EdgePotential f = random_potential(rng, g);
  double P = pressure(g, f);
  for (const Cycle& a : enumerate_cycles(g, 2 * g.num_states())) {
    MarkovMeasure m = cycle_measure(g, a);
    // Orbit measures have zero entropy.
    CHECK(integrate(m, f) <= P + 1e-9);
  }
}

TEST_CASE("pressure derivative: uniform, constant and finite differences") {
  SubshiftGraph two = full_shift(2);
  std::mt19937_64 rng(17);
  EdgePotential dir = random_potential(rng, two);
  double mean = (dir[0] + dir[1] + dir[2] + dir[3]) / 4.0;
  CHECK(pressure_derivative(two, constant_potential(two, 0.0), dir) ==
        doctest::Approx(mean).epsilon(1e-10));

  SubshiftGraph g = random_graph(rng, 5);
  EdgePotential f = random_potential(rng, g);
  CHECK(pressure_derivative(g, f, constant_potential(g, 0.37)) ==
        doctest::Approx(0.37).epsilon(1e-10));

  for (int trial = 0; trial < 10; ++trial) {
    SubshiftGraph h = random_graph(rng, 5);
    EdgePotential base = random_potential(rng, h);
    EdgePotential d = random_potential(rng, h);
    const double step = 1e-4;
    double fd = (pressure(h, add(base, scale(d, step))) -
                 pressure(h, add(base, scale(d, -step)))) /
                (2.0 * step);
    CHECK(std::abs(pressure_derivative(h, base, d) - fd) <= 1e-6);
  }
}

TEST_CASE("pressure is convex along directions") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    SubshiftGraph g = random_graph(rng, 4);
    EdgePotential f = random_potential(rng, g);
    EdgePotential d = random_potential(rng, g);
    const double h = 1e-3;
    auto P = [&](double s) { return pressure(g, add(f, scale(d, s))); };
    double second = (-P(2 * h) + 16 * P(h) - 30 * P(0) + 16 * P(-h) - P(-2 * h)) /
                    (12 * h * h);
    CHECK(second >= -1e-8);
    if (!livsic_reduce(g, d).coboundary_up_to_constant) CHECK(second > 1e-6);
  }
}

TEST_CASE("livsic_reduce accepts planted coboundaries") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    SubshiftGraph g = random_graph(rng, 3 + static_cast<int>(rng() % 5));
    std::vector<double> u0 = random_state_potential(rng, g);
    LivsicResult res = livsic_reduce(g, coboundary_potential(g, u0));
    REQUIRE(res.coboundary_up_to_constant);
    CHECK(std::abs(res.constant) <= 1e-10);
    CHECK(res.max_residual <= 1e-10);
    // Recovered u equals u0 up to a global shift.
    double shift = res.state_potential[0] - u0[0];
    for (int s = 0; s < g.num_states(); ++s)
      CHECK(res.state_potential[s] - u0[s] == doctest::Approx(shift).epsilon(1e-9));
  }

  SubshiftGraph g = golden_mean();
  LivsicResult res = livsic_reduce(g, constant_potential(g, 0.7));
  REQUIRE(res.coboundary_up_to_constant);
  CHECK(res.constant == doctest::Approx(0.7));
  for (double us : res.state_potential) CHECK(std::abs(us) <= 1e-12);
}

TEST_CASE("livsic_reduce rejects with a valid witness cycle") {
  SubshiftGraph gm = golden_mean();
  EdgePotential f = constant_potential(gm, 0.0);
  f[gm.edge_between(0, 1)] = 1.0;
  LivsicResult res = livsic_reduce(gm, f);
  REQUIRE_FALSE(res.coboundary_up_to_constant);
  REQUIRE(res.witness.has_value());
  // First cycle from state 1 is the self-loop, so c = 0 and the witness is
  // the 2-cycle of mean 1/2.
  CHECK(res.constant == doctest::Approx(0.0));
  CHECK(res.witness->length() == 2);
  double mean = cycle_sum(f, *res.witness) / res.witness->length();
  CHECK(std::abs(mean - res.constant) > 1e-10);
}

TEST_CASE("livsic dichotomy matches brute-force cycle means") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    SubshiftGraph g = random_graph(rng, 2 + static_cast<int>(rng() % 4));
    EdgePotential f = (trial % 2 == 0)
                          ? random_potential(rng, g)
                          : add(coboundary_potential(
                                    g, random_state_potential(rng, g)),
                                constant_potential(g, 0.3));
    LivsicResult res = livsic_reduce(g, f);
    bool all_equal = true;
    for (const Cycle& a : enumerate_cycles(g, 2 * g.num_states())) {
      double mean = cycle_sum(f, a) / a.length();
      if (std::abs(mean - res.constant) > 1e-9) all_equal = false;
    }
    CHECK(res.coboundary_up_to_constant == all_equal);
    if (!res.coboundary_up_to_constant) {
      REQUIRE(res.witness.has_value());
      validate_cycle(g, *res.witness);
      double mean = cycle_sum(f, *res.witness) / res.witness->length();
      CHECK(std::abs(mean - res.constant) > 1e-10);
    }
  }
}

TEST_CASE("enumerate_cycles on tiny graphs") {
  SubshiftGraph loop({"a"}, {{0, 0}});
  CHECK(enumerate_cycles(loop, 3).size() == 3);

  SubshiftGraph two = full_shift(2);
  CHECK(enumerate_cycles(two, 1).size() == 2);

  SubshiftGraph gm = golden_mean();
  auto cycles = enumerate_cycles(gm, 4);
  // Brute force: rotation classes of closed walks, deduplicated by set.
  std::set<std::vector<int>> seen;
  for (const Cycle& c : cycles) {
    validate_cycle(gm, c);
    CHECK(canonical_rotation(c).edge_ids == c.edge_ids);
    CHECK(seen.insert(c.edge_ids).second);
  }
  // Necklace count oracle: (1/n) sum_{d|n} phi(n/d) tr(A^d).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = A(0, 1) = A(1, 0) = 1.0;
  auto trace_pow = [&](int n) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
    for (int i = 0; i < n; ++i) P = P * A;
    return static_cast<long>(std::llround(P.trace()));
  };
  auto phi = [](int n) {
    int r = n;
    int out = n;
    for (int p = 2; p * p <= r; ++p)
      if (r % p == 0) {
        out -= out / p;
        while (r % p == 0) r /= p;
      }
    if (r > 1) out -= out / r;
    return out;
  };
  std::map<int, long> by_len;
  for (const Cycle& c : cycles) by_len[c.length()]++;
  for (int n = 1; n <= 4; ++n) {
    long necklaces = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) necklaces += phi(n / d) * trace_pow(d);
    CHECK(by_len[n] == necklaces / n);
  }
}

TEST_CASE("enumerate_cycles enforces the budget") {
  CHECK_THROWS_AS(enumerate_cycles(full_shift(3), 12, 100), Error);
}

TEST_CASE("cycle_measure frequencies") {
  SubshiftGraph gm = golden_mean();
  int e00 = gm.edge_between(0, 0), e01 = gm.edge_between(0, 1),
      e10 = gm.edge_between(1, 0);

  MarkovMeasure loop = cycle_measure(gm, Cycle{{e00}});
  validate_measure(gm, loop);
  CHECK(loop.edge_frequencies[e00] == doctest::Approx(1.0));

  MarkovMeasure two = cycle_measure(gm, Cycle{{e01, e10}});
  validate_measure(gm, two);
  CHECK(two.edge_frequencies[e01] == doctest::Approx(0.5));
  CHECK(two.edge_frequencies[e10] == doctest::Approx(0.5));

  MarkovMeasure tri = cycle_measure(gm, Cycle{{e00, e01, e10}});
  validate_measure(gm, tri);
  CHECK(tri.edge_frequencies[e00] == doctest::Approx(1.0 / 3.0));
  CHECK(tri.edge_frequencies[e01] == doctest::Approx(1.0 / 3.0));
  CHECK(tri.edge_frequencies[e10] == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(cycle_measure(gm, Cycle{{e01, e01}}), Error);
}

TEST_CASE("integrate: constants, cycle means, Monte Carlo cross-check") {
  SubshiftGraph gm = golden_mean();
  MarkovMeasure m = equilibrium_measure(gm, constant_potential(gm, 0.0));
  CHECK(integrate(m, constant_potential(gm, 3.25)) == doctest::Approx(3.25));

  Cycle a{{gm.edge_between(0, 0), gm.edge_between(0, 1), gm.edge_between(1, 0)}};
  std::mt19937_64 rng(31);
  EdgePotential f = random_potential(rng, gm);
  CHECK(integrate(cycle_measure(gm, a), f) ==
        doctest::Approx(cycle_sum(f, a) / a.length()));

  // Sampling oracle: average f along a simulated trajectory of the chain.
  const std::size_t steps = 1000000;
  std::vector<double> samples;
  samples.reserve(steps);
  int state = 0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < steps; ++i) {
    double coin = unif(rng), acc = 0.0;
    int taken = gm.out_edges(state).back();
    for (int e : gm.out_edges(state)) {
      acc += m.edge_probs[e];
      if (coin <= acc) {
        taken = e;
        break;
      }
    }
    samples.push_back(f[taken]);
    state = gm.edge(taken).to;
  }
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / steps;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= steps;
  // Correlated samples: inflate the iid standard error generously.
  double se = 5.0 * std::sqrt(var / steps);
  CHECK(std::abs(integrate(m, f) - mean) <= 3.0 * se);
}

TEST_CASE("graph mismatch is detected") {
  SubshiftGraph gm = golden_mean();
  SubshiftGraph two = full_shift(2);
  MarkovMeasure m = equilibrium_measure(two, constant_potential(two, 0.0));
  CHECK_THROWS_AS(integrate(m, constant_potential(gm, 1.0)), Error);
  CHECK_THROWS_AS(pressure(gm, constant_potential(two, 0.0)), Error);
}
