#include "rwall/transition_kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwall;

namespace {

const Rational kHalf(1, 2);
const Rational kQuarter(1, 4);

// Weyl dimension of the SO(N) irreducible representation with highest weight
// lambda; an independent check on the branching recursion.
double weyl(int N, const Partition& lambda) {
  const int m = N / 2;
  std::vector<double> l(static_cast<std::size_t>(m)), rho(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    rho[static_cast<std::size_t>(i)] = N % 2 == 1 ? m - i - 0.5 : m - i - 1.0;
    l[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] + rho[static_cast<std::size_t>(i)];
  }
  double d = 1;
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t j = i + 1; j < l.size(); ++j) {
      d *= (l[i] * l[i] - l[j] * l[j]) / (rho[i] * rho[i] - rho[j] * rho[j]);
    }
    if (N % 2 == 1) d *= l[i] / rho[i];
  }
  return d;
}

Rational row_sum(int k, const Partition& lambda, const Rational& q, int cap, bool use_T) {
  Rational s = 0;
  for (const auto& b : enumerate_partitions(particles_on_level(k), cap)) {
    s += use_T ? T_k(k, lambda, b, q) : P_level(k, lambda, b, q);
  }
  return s;
}

}  // namespace

TEST_CASE("reflecting kernel R") {
  CHECK(reflect_R(0, 0, kHalf) == Rational(1, 3));
  CHECK(reflect_R(1, 1, kHalf) == Rational(5, 12));
  for (int x = 0; x < 5; ++x) {
    for (int y = 0; y < 5; ++y) CHECK(reflect_R(x, y, Rational(0)) == Rational(x == y ? 1 : 0));
  }
  // law of |x + xi - xi'|: brute-force convolution of two geometric laws
  const double q = 0.5;
  for (int x = 0; x <= 3; ++x) {
    for (int y = 0; y <= 6; ++y) {
      double p = 0;
      for (int a = 0; a < 200; ++a) {
        for (int b = 0; b < 200; ++b) {
          if (std::abs(x + a - b) == y) p += std::pow(q, a + b) * (1 - q) * (1 - q);
        }
      }
      CHECK(to_double(reflect_R(x, y, kHalf)) == doctest::Approx(p).epsilon(1e-12));
    }
  }
}

TEST_CASE("psi and f") {
  CHECK(psi(Rational(2), 0, 3) == Rational(2));
  CHECK(psi(Rational(7, 3), 4, 3) == Rational(0));
  CHECK(f_sm(1, Rational(1), 3, kHalf) == Rational(1, 4));
}

TEST_CASE("truncated sum of f products converges to the closed form") {
  const double q = 0.5;
  const Rational m2 = 1 / (1 + kHalf);
  for (int x = 0; x <= 4; ++x) {
    for (int y = 0; y <= 4; ++y) {
      const double closed = std::min(x, y) == 0
                                ? std::pow(q, x + y) / (1 + q)
                                : (std::pow(q, x + y + 1) - std::pow(q, std::abs(x - y))) / (q * q - 1);
      double prev_err = 1e300;
      for (int S : {10, 20, 40}) {
        Rational sum = 0;
        for (int s = 0; s <= S; ++s) sum += f_sm(s, Rational(1), x, kHalf) * f_sm(s, m2, y, kHalf);
        const double err = std::abs(to_double(sum) - closed);
        CHECK(err <= prev_err);
        prev_err = err;
      }
      CHECK(prev_err < 1e-9);
    }
  }
}

TEST_CASE("interlacing determinant") {
  CHECK(interlace_det(Partition{0}, Partition{2}, Rational(3)) == Rational(3));
  CHECK(interlace_det(Partition{1, 0}, Partition{2, 1}, Rational(2)) == Rational(2));
  CHECK(interlace_det(Partition{3, 0}, Partition{2, 1}, Rational(5)) == Rational(0));
}

TEST_CASE("closed-form I") {
  CHECK(I_closed(HalfIndex::minus, 0, 0, kHalf) == Rational(1, 3));
  CHECK(I_closed(HalfIndex::plus, 0, 0, kHalf) == Rational(1, 6));
  for (int l = 0; l < 6; ++l) {
    for (int s = 0; s < 6; ++s) CHECK(I_closed(HalfIndex::minus, l, s, kQuarter) == reflect_R(l, s, kQuarter));
  }
}

TEST_CASE("dims") {
  CHECK(dim(2, Partition{5}) == 1);
  CHECK(dim(3, Partition{0}) == 1);
  for (int l = 0; l < 20; ++l) CHECK(dim(3, Partition{l}) == 2 * l + 1);
  CHECK(dim(4, Partition{1, 0}) == 4);
  CHECK(dim(5, Partition{1, 0}) == 5);
  CHECK(dim(5, Partition{1, 1}) == 10);
  for (int N = 3; N <= 8; ++N) {
    for (const auto& lam : enumerate_partitions(N / 2, 5)) {
      CHECK(static_cast<double>(dim(N, lam).get_d()) == doctest::Approx(weyl(N, lam)).epsilon(1e-12));
    }
  }
}

TEST_CASE("kappa and links") {
  CHECK(kappa(2, Partition{3}, Partition{0}) == 1);
  CHECK(kappa(2, Partition{3}, Partition{2}) == 2);
  CHECK(kappa(3, Partition{2, 1}, Partition{1}) == 1);
  CHECK(kappa(3, Partition{2, 1}, Partition{3}) == 0);
  CHECK(T_link(2, Partition{3}, Partition{2}) == Rational(2, 7));
  CHECK(T_link(3, Partition{2, 1}, Partition{3}) == Rational(0));
  for (int k = 2; k <= 5; ++k) {
    for (const auto& lam : enumerate_partitions(particles_on_level(k), 4)) {
      Rational s = 0;
      for (const auto& mu : partitions_below(k, lam)) s += T_link(k, lam, mu);
      CHECK(s == Rational(1));
    }
  }
}

TEST_CASE("single-level kernels") {
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      CHECK(P_level(1, Partition{a}, Partition{b}, kHalf) == reflect_R(a, b, kHalf));
      CHECK(T_level(1, HalfIndex::minus, Partition{a}, Partition{b}, kHalf) == reflect_R(a, b, kHalf));
    }
  }
  CHECK(P_level(3, Partition{1, 0}, Partition{0, 0}, kHalf) > 0);
  CHECK_THROWS_AS(P_level(3, Partition{1}, Partition{0, 0}, kHalf), std::invalid_argument);
}

TEST_CASE("P_k = T_k on a small grid") {
  for (const Rational& q : {kQuarter, kHalf}) {
    for (int k = 1; k <= 4; ++k) {
      for (const auto& lam : enumerate_partitions(particles_on_level(k), 3)) {
        for (const auto& bet : enumerate_partitions(particles_on_level(k), 3)) {
          CHECK(P_level(k, lam, bet, q) == T_k(k, lam, bet, q));
        }
      }
    }
  }
}

TEST_CASE("rows are substochastic and increase toward 1 with the cap") {
  for (int k = 1; k <= 4; ++k) {
    const Partition lam = Partition::zeros(particles_on_level(k));
    std::vector<double> deficit;
    Rational prev = 0;
    for (int cap : {2, 6, 12, 24}) {
      const Rational s = row_sum(k, lam, kHalf, cap, true);
      CHECK(s <= 1);
      CHECK(s >= prev);
      prev = s;
      deficit.push_back(to_double(1 - s));
    }
    // geometric tail: doubling the cap from 12 to 24 removes most of the deficit
    CHECK(deficit[3] < deficit[2] / 10);
    CHECK(deficit[3] < 1e-4);
  }
}

TEST_CASE("vanishing on separated pairs") {
  for (const auto& lam : enumerate_partitions(2, 4)) {
    for (const auto& bet : enumerate_partitions(2, 4)) {
      if (std::max(lam[1], bet[1]) > std::min(lam[0], bet[0])) {
        CHECK(P_level(3, lam, bet, kHalf) == 0);
        CHECK(T_k(4, lam, bet, kHalf) == 0);
      }
    }
  }
}

TEST_CASE("Delta: truncated series encloses the intertwined value") {
  for (int k = 2; k <= 4; ++k) {
    for (const auto& lam : enumerate_partitions(particles_on_level(k), 2)) {
      for (const auto& mu : partitions_below(k, lam)) {
        const Rational exact = Delta_intertwined(k, lam, mu, kHalf);
        Rational width = 1;
        for (int cap : {5, 10, 20}) {
          DeltaOptions opts;
          opts.cap = cap;
          const TruncatedSum t = Delta(k, lam, mu, kHalf, opts);
          CHECK(t.partial <= exact);
          CHECK(exact <= t.partial + t.tail_bound);
          CHECK(t.tail_bound < width);
          width = t.tail_bound;
        }
      }
    }
  }
}

TEST_CASE("multi-level kernel") {
  // one level: the single-level kernel
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      const auto v = T_multilevel(InterlacedState({Partition{a}}, 0), InterlacedState({Partition{b}}, 2), kHalf);
      CHECK(v.lower == reflect_R(a, b, kHalf));
      CHECK(v.upper == v.lower);
    }
  }
  // pair the dynamics forbid
  const InterlacedState from({Partition{0}, Partition{1}, Partition{1, 0}}, 0);
  const InterlacedState to({Partition{0}, Partition{0}, Partition{0, 0}}, 2);
  const auto v = T_multilevel(from, to, kHalf);
  CHECK(v.lower > 0);
  // partial stochasticity from the densely packed state
  double prev_total = 0;
  for (int cap : {3, 5, 8}) {
    double total = 0, radius = 0;
    for (const auto& st : enumerate_states(3, cap)) {
      const auto m = T_multilevel(densely_packed(3), st, kHalf);
      total += m.value;
      radius += m.error_radius;
      CHECK(m.lower >= 0);
    }
    CHECK(total <= 1 + radius + 1e-12);
    CHECK(total > prev_total);
    prev_total = total;
  }
  CHECK(prev_total > 0.95);
  // truncated and intertwined Delta give enclosures of the same value
  MultilevelOptions tr;
  tr.delta_method = DeltaMethod::truncated;
  const auto w = T_multilevel(from, to, kHalf, tr);
  CHECK(w.lower <= v.lower);
  CHECK(v.lower <= w.upper);
}

TEST_CASE("level matrix and evolution") {
  const auto m = level_matrix(1, kHalf, 3);
  REQUIRE(m.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(m.entries[i][j] == reflect_R(static_cast<int>(i), static_cast<int>(j), kHalf));
    }
  }
  const auto m3 = level_matrix(3, kHalf, 3);
  for (std::size_t i = 1; i < m3.size(); ++i) CHECK(graded_less(m3.index[i - 1], m3.index[i]));

  const auto d0 = evolve_level(2, 0, kHalf, 5);
  CHECK(d0.probabilities[0] == 1);
  for (std::size_t i = 1; i < d0.probabilities.size(); ++i) CHECK(d0.probabilities[i] == 0);

  // R^2(0, .) by direct convolution
  const auto d2 = evolve_level(1, 2, kHalf, 30);
  for (int s = 0; s <= 10; ++s) {
    double conv = 0;
    for (int j = 0; j < 200; ++j) conv += to_double(reflect_R(0, j, kHalf)) * to_double(reflect_R(j, s, kHalf));
    CHECK(to_double(d2.probabilities[static_cast<std::size_t>(s)]) == doctest::Approx(conv).epsilon(1e-12));
  }
  // Leakage at cap 30 is the mass the truncated chain loses. It can never be
  // below the true tail P(X_n > 30), which passes 1e-8 already at n = 3
  // (4.1e-8) and reaches 1.5e-6 at n = 6, so the 1e-8 bound only holds for n <= 2.
  for (int n = 0; n <= 6; ++n) {
    const double leak = to_double(evolve_level(1, n, kHalf, 30).leakage);
    const auto wide = evolve_level(1, n, kHalf, 120);
    double tail = 0;
    for (std::size_t s = 31; s < wide.probabilities.size(); ++s) tail += to_double(wide.probabilities[s]);
    CHECK(leak >= tail * (1 - 1e-9));
    CHECK(leak <= 1.5 * tail + 1e-300);
    if (n <= 2) CHECK(leak < 1e-8);
    CHECK(to_double(evolve_level(1, n, kHalf, 80).leakage) < 1e-18);
  }
}

TEST_CASE("fixed-time law agrees with the exact multi-level kernel at n = 1") {
  const FixedTimeLaw law(0.5, 1, 3, 6);
  for (const auto& st : enumerate_states(3, 3)) {
    const auto exact = T_multilevel(densely_packed(3), st, kHalf);
    CHECK(law.probability(st) == doctest::Approx(exact.value).epsilon(1e-10));
  }
}
