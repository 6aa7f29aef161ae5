#include "rwall/correlation_kernel.hpp"
#include "rwall/transition_kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

using namespace rwall;

TEST_CASE("Jacobi polynomials") {
  for (double x : {-0.9, -0.2, 0.4, 1.0}) CHECK(jacobi_eval(HalfIndex::minus, 0, x) == doctest::Approx(1.0));
  CHECK(jacobi_eval(HalfIndex::minus, 2, 0.5) == doctest::Approx(-0.5));
  CHECK(jacobi_eval(HalfIndex::plus, 0, 1.0) == doctest::Approx(1.0));
  // complex and real evaluations agree on [-1, 1] and off it via the coefficients
  for (HalfIndex a : {HalfIndex::minus, HalfIndex::plus}) {
    for (int s = 0; s <= 6; ++s) {
      const auto c = jacobi_shifted_coefficients(a, s);
      for (double x : {-0.7, 0.1, 0.95}) {
        CHECK(jacobi_eval(a, s, std::complex<double>(x, 0)).real() == doctest::Approx(jacobi_eval(a, s, x)));
      }
      const std::complex<double> z(1.3, 0.8);
      std::complex<double> poly = 0, p = 1;
      for (double ci : c) {
        poly += ci * p;
        p *= z - 1.0;
      }
      CHECK(std::abs(poly - jacobi_eval(a, s, z)) < 1e-10 * std::max(1.0, std::abs(poly)));
    }
  }
}

TEST_CASE("weights and the multiplier") {
  CHECK(W_weight(HalfIndex::minus, 3) == 2);
  CHECK(W_weight(HalfIndex::minus, 0) == 1);
  CHECK(W_weight(HalfIndex::plus, 0) == 1);
  CHECK(std::abs(phi_alpha(1.0, 3.0) - 1.0) < 1e-15);
  CHECK(std::abs(phi_alpha(0.0, 1.0) - 0.4) < 1e-15);
  CHECK(std::abs(phi_alpha({0.3, 0.2}, 0.0) - 1.0) < 1e-15);
  CHECK(phi_pole(2.0) == 1.25);
  CHECK_THROWS_AS(phi_alpha(1.25, 2.0), SingularPoint);
}

TEST_CASE("defining integral of I reproduces the closed forms") {
  // x = cos(t): (1-x)^a (1+x)^(-1/2) dx becomes dt (a = -1/2) or (1 - cos t) dt (a = +1/2)
  const double q = 0.5, alpha = 2 * q / (1 - q);
  for (HalfIndex a : {HalfIndex::minus, HalfIndex::plus}) {
    for (int l = 0; l <= 10; ++l) {
      for (int s = 0; s <= 10; ++s) {
        auto f = [&](double t) {
          const double x = std::cos(t);
          const double w = a == HalfIndex::minus ? 1.0 : 1.0 - x;
          return jacobi_eval(a, s, x) * jacobi_eval(a, l, x) * phi_alpha(x, alpha).real() * w;
        };
        const double integral =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 10, 1e-14);
        const double value = W_weight(a, s) / std::numbers::pi * integral;
        CHECK(std::abs(value - to_double(I_closed(a, l, s, Rational(1, 2)))) < 1e-10);
      }
    }
  }
}

TEST_CASE("first term is W-weighted orthonormality") {
  for (int k = 1; k <= 4; ++k) {
    for (int s1 = 0; s1 <= 5; ++s1) {
      for (int s2 = 0; s2 <= 5; ++s2) {
        const double v = kernel_first_term(kernel_point(k, s1), kernel_point(k, s2));
        CHECK(std::abs(v - (s1 == s2 ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("contour radius") {
  QuadratureSpec q;
  CHECK(effective_radius(q, 0.5) == doctest::Approx(1.5));
  const double pole = phi_pole(2.0);
  CHECK(pole < 1.5);
  CHECK(effective_radius(q, 2.0) == doctest::Approx((1 + pole) / 2));
  q.contour_radius = 0.9;
  CHECK_THROWS_AS(effective_radius(q, 0.5), std::invalid_argument);
}

TEST_CASE("kernel at n = 0 is the densely packed indicator") {
  for (int k = 1; k <= 5; ++k) {
    for (int s = 0; s <= 8; ++s) {
      const auto p = kernel_point(k, s);
      const auto v = kernel_K(p, p, 0, 2.0);
      CHECK(std::abs(v.value - (s < particles_on_level(k) ? 1.0 : 0.0)) < 1e-8);
      CHECK_FALSE(v.accuracy_warning);
    }
  }
}

TEST_CASE("level-1 kernel diagonal is R^n(0, s)") {
  const Rational q(1, 2);
  for (int n = 0; n <= 6; ++n) {
    const auto d = evolve_level(1, n, q, 60);
    for (int s = 0; s <= 12; ++s) {
      const auto p = kernel_point(1, s);
      CHECK(std::abs(kernel_K(p, p, n, 2.0).value - to_double(d.probabilities[static_cast<std::size_t>(s)])) < 1e-8);
    }
  }
}

TEST_CASE("kernel diagonal is a density and its trace counts particles") {
  const double alpha = 2.0;
  for (int k = 1; k <= 4; ++k) {
    for (int n : {1, 3}) {
      double trace = 0;
      for (int s = 0; s <= 60; ++s) {
        const auto p = kernel_point(k, s);
        const double b = kernel_K_binomial(p, p, n, alpha);
        trace += b;
        if (s <= 20) {
          const auto v = kernel_K(p, p, n, alpha);
          CHECK_FALSE(v.accuracy_warning);
          CHECK(v.value >= -1e-6);
          CHECK(v.value <= 1 + 1e-6);
          CHECK(std::abs(v.value - b) < 1e-10);
        }
      }
      CHECK(trace == doctest::Approx(particles_on_level(k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("far sites lose double precision visibly; extended precision recovers them") {
  QuadratureSpec ext;
  ext.precision = Precision::extended;
  for (int k : {1, 4}) {
    const auto p = kernel_point(k, 40);
    const auto d = kernel_K(p, p, 3, 2.0);
    CHECK(d.accuracy_warning);
    CHECK(d.imag_residue > kImagResidueThreshold);
    const auto e = kernel_K(p, p, 3, 2.0, ext);
    CHECK_FALSE(e.accuracy_warning);
    const double b = kernel_K_binomial(p, p, 3, 2.0);
    CHECK(std::abs(e.value - b) < 1e-12);
  }
}

TEST_CASE("quadrature self-consistency and route agreement") {
  QuadratureSpec fine;
  fine.n_x = 1024;
  fine.n_u = 1024;
  for (int n : {0, 4, 10}) {
    for (auto [k1, s1, k2, s2] : std::vector<std::array<int, 4>>{{1, 0, 1, 2}, {3, 1, 3, 1}, {4, 2, 3, 0}, {2, 3, 4, 1}}) {
      const auto p1 = kernel_point(k1, s1), p2 = kernel_point(k2, s2);
      const double v = kernel_K(p1, p2, n, 1.0).value;
      CHECK(std::abs(v - kernel_K(p1, p2, n, 1.0, fine).value) < 1e-10);
      CHECK(std::abs(v - kernel_K_binomial(p1, p2, n, 1.0)) < 1e-10);
    }
  }
}

TEST_CASE("extended precision agrees with double") {
  QuadratureSpec ext;
  ext.n_x = 128;
  ext.n_u = 128;
  QuadratureSpec dbl = ext;
  ext.precision = Precision::extended;
  const auto p1 = kernel_point(3, 1), p2 = kernel_point(2, 2);
  CHECK(std::abs(kernel_K(p1, p2, 3, 2.0, ext).value - kernel_K(p1, p2, 3, 2.0, dbl).value) < 1e-12);
  CHECK(parse_precision("extended") == Precision::extended);
  CHECK_THROWS_AS(parse_precision("quad"), std::invalid_argument);
}

TEST_CASE("correlation functions") {
  const auto p = kernel_point(3, 1), p2 = kernel_point(3, 2);
  CHECK(correlation({p}, 2, 2.0) == doctest::Approx(kernel_K(p, p, 2, 2.0).value));
  CHECK(std::abs(correlation({p, p}, 2, 2.0)) < 1e-12);
  const double k11 = kernel_K(p, p, 2, 2.0).value, k12 = kernel_K(p, p2, 2, 2.0).value;
  const double k21 = kernel_K(p2, p, 2, 2.0).value, k22 = kernel_K(p2, p2, 2, 2.0).value;
  CHECK(correlation({p, p2}, 2, 2.0) == doctest::Approx(k11 * k22 - k12 * k21));
  CHECK(correlation_binomial({p, p2}, 2, 2.0) == doctest::Approx(k11 * k22 - k12 * k21).epsilon(1e-9));
}
