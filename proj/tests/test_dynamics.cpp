#include "rwall/dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rwall;

namespace {

// Worked example in unshifted coordinates.
const Levels kBefore{{1}, {3}, {3, 2}, {3, 3}};
const Levels kHalf{{1}, {1}, {3, 1}, {3, 2}};
const Levels kAfter{{3}, {4}, {4, 0}, {5, 3}};

NoiseDraws worked_draws() {
  NoiseDraws d;
  d.left = {{1}, {3}, {1, 1}, {0, 2}};
  d.right = {{3}, {1}, {0, 0}, {1, 2}};
  return d;
}

bool valid(const Levels& x) {
  std::vector<Partition> levels;
  for (const auto& v : x) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] < v[i + 1]) return false;
    }
    for (int p : v) {
      if (p < 0) return false;
    }
    levels.emplace_back(v);
  }
  return is_valid_interlaced(levels);
}

}  // namespace

TEST_CASE("geometric sampler") {
  RandomStream rng(1, 0);
  const GeometricSampler zero(0.0);
  for (int i = 0; i < 1000; ++i) CHECK(zero(rng) == 0);
  CHECK_THROWS_AS(GeometricSampler(1.0), std::invalid_argument);
  CHECK_THROWS_AS(GeometricSampler(-0.1), std::invalid_argument);

  const GeometricSampler half(0.5);
  const int N = 1000000;
  double sum = 0;
  long twos = 0;
  for (int i = 0; i < N; ++i) {
    const int x = half(rng);
    sum += x;
    if (x == 2) ++twos;
  }
  CHECK(std::abs(sum / N - 1.0) < 0.01);
  const double p = 0.125, se = std::sqrt(p * (1 - p) / N);
  CHECK(std::abs(static_cast<double>(twos) / N - p) < 3 * se);
}

TEST_CASE("worked example: left half step") {
  const Levels half = left_halfstep(kBefore, worked_draws());
  CHECK(half == kHalf);
  // level 2: X^2_1 = 3, xi = 3, blocked below by X^1_1(n) = 1
  CHECK(half[1][0] == 1);
  // level 3 bottom follows the pushed level-2 particle
  CHECK(half[2][1] == 1);
  CHECK(half[3][1] == 2);
}

TEST_CASE("worked example: right half step and shifts") {
  const Levels next = right_halfstep(kHalf, kBefore, worked_draws());
  CHECK(next == kAfter);
  CHECK(next[0][0] == 3);
  CHECK(next[2][1] == 0);
  CHECK(shift_to_simple(4, Partition(next[3])) == std::vector<int>{6, 3});
  const InterlacedState s0(std::vector<Partition>{Partition{1}, Partition{3}, Partition{3, 2}, Partition{3, 3}}, 0);
  const InterlacedState s1 = step(s0, worked_draws());
  CHECK(s1.half_steps() == 2);
  CHECK(to_levels(s1) == kAfter);
}

TEST_CASE("half-step time bookkeeping") {
  const auto s = densely_packed(3);
  const auto half = left_halfstep(s, NoiseDraws::zeros(3));
  CHECK(half.half_steps() == 1);
  CHECK_THROWS_AS(left_halfstep(half, NoiseDraws::zeros(3)), std::invalid_argument);
  CHECK_THROWS_AS(right_halfstep(s, s, NoiseDraws::zeros(3)), std::invalid_argument);
  CHECK_THROWS_AS(left_halfstep(s, NoiseDraws::zeros(2)), std::invalid_argument);
}

TEST_CASE("zero draws leave any valid state unchanged") {
  for (const auto& levels : std::vector<Levels>{kBefore, kAfter, {{0}, {2}, {2, 0}, {4, 1}, {4, 1, 0}}}) {
    const NoiseDraws zero = NoiseDraws::zeros(static_cast<int>(levels.size()));
    const Levels half = left_halfstep(levels, zero);
    CHECK(half == levels);
    CHECK(right_halfstep(half, levels, zero) == levels);
  }
}

TEST_CASE("q = 0 keeps the densely packed state") {
  RandomStream rng(5, 0);
  const auto traj = simulate(ModelParams::from_q(Rational(0)), 4, 6, rng);
  REQUIRE(traj.size() == 7);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    CHECK(traj[t].same_configuration(densely_packed(4)));
    CHECK(traj[t].time() == static_cast<double>(t));
  }
}

TEST_CASE("simulate: zero steps and determinism") {
  const auto p = ModelParams::from_q(Rational(1, 2));
  RandomStream a(9, 3), b(9, 3), c(10, 3);
  const auto zero = simulate(p, 3, 0, a);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == densely_packed(3));
  const auto t1 = simulate(p, 5, 20, a);
  const auto t2 = simulate(p, 5, 20, b);
  const auto t3 = simulate(p, 5, 20, c);
  CHECK(t1.size() == 21);
  CHECK(t1 == t2);
  CHECK(t1 != t3);
}

TEST_CASE("random steps preserve interlacing") {
  const GeometricSampler geo(0.6);
  NoiseDraws scratch;
  for (std::uint64_t traj = 0; traj < 2000; ++traj) {
    RandomStream rng(77, traj);
    Levels x = to_levels(densely_packed(6));
    for (int t = 0; t < 15; ++t) {
      step_in_place(x, geo, rng, scratch);
      REQUIRE(valid(x));
    }
  }
}

TEST_CASE("the formula as typeset breaks interlacing on some draws") {
  // Kept only for comparison: reading X(n) instead of X(n + 1/2) inside the
  // bottom jump lets level 3 pass level 2.
  const GeometricSampler geo(0.5);
  NoiseDraws scratch;
  long broken = 0;
  for (std::uint64_t traj = 0; traj < 20000 && broken == 0; ++traj) {
    RandomStream rng(3, traj);
    Levels x = to_levels(densely_packed(3));
    for (int t = 0; t < 2 && broken == 0; ++t) {
      step_in_place(x, geo, rng, scratch, BottomRule::printed);
      if (!valid(x)) ++broken;
    }
  }
  CHECK(broken > 0);
}

TEST_CASE("level-1 marginal after one step at q = 1/2") {
  const GeometricSampler geo(0.5);
  NoiseDraws scratch;
  const long N = 1000000;
  long zeros = 0;
  for (long i = 0; i < N; ++i) {
    RandomStream rng(11, static_cast<std::uint64_t>(i));
    Levels x{{0}};
    step_in_place(x, geo, rng, scratch);
    if (x[0][0] == 0) ++zeros;
  }
  // R(0,0) = (1-q)/(1+q) = 1/3
  const double p = 1.0 / 3.0, se = std::sqrt(p * (1 - p) / N);
  CHECK(std::abs(static_cast<double>(zeros) / N - p) < 3 * se);
}
