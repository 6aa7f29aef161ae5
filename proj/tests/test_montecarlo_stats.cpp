#include "rwall/montecarlo_stats.hpp"
#include "rwall/transition_kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwall;

namespace {

EnsembleConfig config(const Rational& q, int levels, int steps, long n, std::uint64_t seed = 4) {
  EnsembleConfig c;
  c.params = ModelParams::from_q(q);
  c.num_levels = levels;
  c.n_steps = steps;
  c.num_trajectories = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("densities at n = 0 are exact") {
  const auto est = empirical_level_density(config(Rational(1, 2), 5, 0, 1000), 5, {0, 1, 2, 3, 4});
  for (const auto& e : est) {
    CHECK(e.mean == (e.site < 3 ? 1.0 : 0.0));
    CHECK(e.std_error == 0.0);
  }
}

TEST_CASE("level densities after one step match the exact rows") {
  const Rational q(1, 2);
  const auto l1 = empirical_level_density(config(q, 1, 1, 1000000), 1, {0});
  CHECK(std::abs(l1[0].mean - 1.0 / 3.0) < 4 * l1[0].std_error);
  // level 2, one particle: density at site s is P_2((0), (s))
  const auto l2 = empirical_level_density(config(q, 2, 1, 400000), 2, {0, 1, 2, 3});
  for (const auto& e : l2) {
    const double p = to_double(P_level(2, Partition{0}, Partition{e.site}, q));
    CHECK(std::abs(e.mean - p) < 4 * e.std_error);
  }
}

TEST_CASE("multi-level histograms") {
  const auto h0 = empirical_multilevel_histogram(config(Rational(1, 2), 3, 0, 2000));
  REQUIRE(h0.size() == 1);
  CHECK(h0.begin()->first == std::vector<int>{0, 0, 0, 0});
  CHECK(h0.begin()->second == 2000);
  const auto hq = empirical_multilevel_histogram(config(Rational(0), 4, 5, 2000));
  REQUIRE(hq.size() == 1);
  CHECK(hq.begin()->second == 2000);
}

TEST_CASE("ensembles are reproducible and independent of the thread count") {
  auto c = config(Rational(1, 3), 4, 3, 20000, 99);
  c.threads = 1;
  const auto a = empirical_multilevel_histogram(c);
  c.threads = 3;
  const auto b = empirical_multilevel_histogram(c);
  CHECK(a == b);
  c.seed = 100;
  CHECK(empirical_multilevel_histogram(c) != a);
}

TEST_CASE("chi-square comparison") {
  const Rational q(1, 2);
  const auto d = evolve_level(1, 3, q, 60);
  Distribution exact;
  for (std::size_t i = 0; i < d.index.size(); ++i) exact[d.index[i].parts()] = to_double(d.probabilities[i]);
  const Histogram h = level_histogram(config(q, 1, 3, 1000000), 1);
  const auto good = chi_square_exact(h, exact);
  CHECK(good.verdict == Verdict::pass);

  Distribution perturbed = exact;
  perturbed[{1}] += 0.05;
  CHECK(chi_square_exact(h, perturbed).verdict == Verdict::fail);

  Histogram outside = h;
  outside[{500}] = 1;
  CHECK(chi_square_exact(outside, exact).verdict == Verdict::fail);

  CHECK(chi_square_two_sample(h, h).verdict == Verdict::pass);
  CHECK(chi_square_exact(Histogram{{{0}, 10}}, Distribution{{{0}, 1.0}}).verdict == Verdict::inconclusive);
}

TEST_CASE("standard-error and total-variation helpers") {
  CHECK(within_standard_errors("x", 0.5, 0.01, 0.53).verdict == Verdict::pass);
  CHECK(within_standard_errors("x", 0.5, 0.01, 0.55).verdict == Verdict::fail);
  const Distribution p{{{0}, 0.5}, {{1}, 0.5}}, q{{{0}, 0.25}, {{2}, 0.75}};
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(p, q) == doctest::Approx(0.75));
  const double b1 = tv_sampling_bound(p, 1000), b2 = tv_sampling_bound(p, 100000);
  CHECK(b1 > 0.0);
  CHECK(b2 < b1);
  CHECK(tv_sampling_bound(p, 1000, 0.99, 200, 5) == tv_sampling_bound(p, 1000, 0.99, 200, 5));
}

TEST_CASE("structural obstruction of the forbidden move") {
  const InterlacedState from({Partition{0}, Partition{1}, Partition{1, 0}}, 0);
  const InterlacedState to({Partition{0}, Partition{0}, Partition{0, 0}}, 2);
  CHECK(structural_obstruction(from, to).has_value());
  CHECK_FALSE(structural_obstruction(from, InterlacedState({Partition{1}, Partition{1}, Partition{1, 0}}, 2)));
  const Histogram h = one_step_histogram(from, ModelParams::from_q(Rational(1, 2)), 200000, 8);
  CHECK(h.count({0, 0, 0, 0}) == 0);
  long total = 0;
  for (const auto& [key, n] : h) {
    total += n;
    std::vector<Partition> levels{Partition{key[0]}, Partition{key[1]}, Partition{key[2], key[3]}};
    CHECK_FALSE(structural_obstruction(from, InterlacedState(levels, 2)));
  }
  CHECK(total == 200000);
}

TEST_CASE("report entries carry the required fields") {
  TestStatistic t;
  t.test = "x";
  t.statistic = 1.5;
  t.threshold = 2;
  t.verdict = Verdict::pass;
  const auto j = to_json(t, 42, 0.25);
  for (const char* key : {"test", "statistic", "threshold", "verdict", "seed", "runtime"}) CHECK(j.contains(key));
  CHECK(j["verdict"] == "pass");
  CHECK(j["seed"] == 42);
}
