#include "rwall/lattice_states.hpp"

#include <doctest.h>

#include <random>

using namespace rwall;

TEST_CASE("partitions are nonincreasing and nonnegative") {
  CHECK_NOTHROW(Partition{3, 3, 0});
  CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Partition({2, -1}), std::invalid_argument);
  CHECK(Partition{3, 2}.to_string() == "(3,2)");
}

TEST_CASE("graded lexicographic enumeration") {
  const auto ps = enumerate_partitions(2, 2);
  REQUIRE(ps.size() == 6);
  CHECK(ps[0] == Partition{0, 0});
  CHECK(ps[1] == Partition{1, 0});
  CHECK(ps[2] == Partition{1, 1});
  CHECK(ps[3] == Partition{2, 0});
  CHECK(ps[4] == Partition{2, 1});
  CHECK(ps[5] == Partition{2, 2});
  for (std::size_t i = 1; i < ps.size(); ++i) CHECK(graded_less(ps[i - 1], ps[i]));
}

TEST_CASE("interlaces examples") {
  CHECK(interlaces(Partition{0}, Partition{0, 0}));
  CHECK(interlaces(Partition{1}, Partition{1, 0}));
  CHECK_FALSE(interlaces(Partition{2}, Partition{1, 0}));
  CHECK(interlaces(Partition{1}, Partition{3}));
  CHECK_FALSE(interlaces(Partition{4}, Partition{3}));
  CHECK_THROWS_AS(interlaces(Partition{1}, Partition{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("shift to the simple process") {
  CHECK(shift_to_simple(3, Partition{3, 2}) == std::vector<int>{4, 2});
  CHECK(shift_to_simple(1, Partition{1}) == std::vector<int>{1});
  CHECK(shift_to_simple(4, Partition{0, 0}) == std::vector<int>{1, 0});
  CHECK_THROWS_AS(shift_to_simple(3, Partition{1}), std::invalid_argument);
}

TEST_CASE("shifted positions are strictly decreasing exactly for partitions") {
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; b <= 5; ++b) {
      for (int c = 0; c <= 5; ++c) {
        const std::vector<int> x{a, b, c};
        const auto s = shift_to_simple(5, std::span<const int>(x));
        const bool strictly = s[0] > s[1] && s[1] > s[2];
        CHECK(strictly == (a >= b && b >= c));
      }
    }
  }
}

TEST_CASE("densely packed states") {
  CHECK(densely_packed(1).levels() == std::vector<Partition>{Partition{0}});
  CHECK(densely_packed(3).levels() == std::vector<Partition>{Partition{0}, Partition{0}, Partition{0, 0}});
  CHECK(densely_packed(4).levels() ==
        std::vector<Partition>{Partition{0}, Partition{0}, Partition{0, 0}, Partition{0, 0}});
  CHECK(densely_packed(4).time() == 0.0);
}

TEST_CASE("height function") {
  const auto dense = densely_packed(4);
  CHECK(height_function(dense, 4, 0) == 1);
  CHECK(height_function(dense, 1, 5) == 0);
  CHECK_THROWS_AS(height_function(dense, 1, -1), std::invalid_argument);
  // State at time n of the worked table: level 3 is (3,2), shifted (4,2).
  const InterlacedState fig({Partition{1}, Partition{3}, Partition{3, 2}, Partition{3, 3}}, 0);
  CHECK(height_function(fig, 3, 1) == 2);
  CHECK(height_function(fig, 3, 2) == 1);
  CHECK(height_function(fig, 3, 4) == 0);
}

TEST_CASE("height function is nonincreasing and drops by one per particle") {
  const InterlacedState st({Partition{2}, Partition{4}, Partition{4, 1}, Partition{5, 1}, Partition{5, 3, 0}}, 0);
  for (int k = 1; k <= st.num_levels(); ++k) {
    const auto shifted = shift_to_simple(k, st.level(k));
    for (int x = 0; x < 12; ++x) {
      const int occupied = static_cast<int>(std::count(shifted.begin(), shifted.end(), x + 1));
      CHECK(height_function(st, k, x) - height_function(st, k, x + 1) == occupied);
    }
    const int at_zero = static_cast<int>(std::count(shifted.begin(), shifted.end(), 0));
    CHECK(height_function(st, k, 0) + at_zero == static_cast<int>(shifted.size()));
    CHECK(height_function(st, k, 30) == 0);
  }
}

TEST_CASE("level labels under both conventions") {
  CHECK(level_label(2, LevelConvention::kernel_theorem) == LevelLabel{2, 1, HalfIndex::minus});
  CHECK(level_label(1, LevelConvention::kernel_theorem) == LevelLabel{1, 0, HalfIndex::plus});
  CHECK(level_label(1, LevelConvention::t_matrix) == LevelLabel{1, 1, HalfIndex::minus});
  CHECK(level_label(4, LevelConvention::t_matrix) == LevelLabel{4, 2, HalfIndex::plus});
  for (int k = 1; k <= 12; ++k) {
    const auto t = level_label(k, LevelConvention::t_matrix);
    CHECK(t.r == particles_on_level(k));
    // kernel convention: 2r + 1/2 + a = k; T-matrix convention: the same sum is k + 1.
    const auto kt = level_label(k, LevelConvention::kernel_theorem);
    CHECK(4 * kt.r + 1 + twice(kt.a) == 2 * k);
    CHECK(4 * t.r + 1 + twice(t.a) == 2 * (k + 1));
  }
}

TEST_CASE("validator agrees with a brute-force pairwise check on random arrays") {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> part(0, 3);
  int valid = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int K = 1 + trial % 5;
    std::vector<Partition> levels;
    std::vector<std::vector<int>> raw;
    bool parts_ok = true;
    for (int k = 1; k <= K; ++k) {
      std::vector<int> x(static_cast<std::size_t>(particles_on_level(k)));
      for (auto& v : x) v = part(gen);
      std::sort(x.rbegin(), x.rend());
      raw.push_back(x);
      levels.emplace_back(x);
    }
    bool brute = parts_ok;
    for (int k = 1; k < K; ++k) {
      const auto& lo = raw[static_cast<std::size_t>(k - 1)];
      const auto& hi = raw[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i]) brute = false;
        if (i + 1 < hi.size() && hi[i + 1] > lo[i]) brute = false;
      }
    }
    CHECK(is_valid_interlaced(levels) == brute);
    bool pairwise = true;
    for (int k = 1; k < K; ++k) {
      pairwise = pairwise && interlaces(levels[static_cast<std::size_t>(k - 1)], levels[static_cast<std::size_t>(k)]);
    }
    CHECK(pairwise == brute);
    if (brute) {
      ++valid;
      CHECK_NOTHROW(InterlacedState(levels, 0));
    } else {
      CHECK_THROWS_AS(InterlacedState(levels, 0), std::invalid_argument);
    }
  }
  CHECK(valid > 1000);
}

TEST_CASE("json form keeps field order and round-trips") {
  const InterlacedState st({Partition{1}, Partition{3}, Partition{3, 2}}, 3);
  const auto j = to_json(st);
  CHECK(j.dump() == R"({"time":1.5,"levels":[[1],[3],[3,2]]})");
  CHECK(state_from_json(nlohmann::json::parse(j.dump())) == st);
}

TEST_CASE("model parameters") {
  const auto p = ModelParams::from_q(Rational(1, 2));
  CHECK(p.alpha == Rational(2));
  CHECK(ModelParams::from_alpha(Rational(2)).q == Rational(1, 2));
  CHECK(ModelParams::from_q(Rational(0)).alpha == Rational(0));
  CHECK_THROWS_AS(ModelParams::from_q(Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::from_q(Rational(-1, 3)), std::invalid_argument);
}
