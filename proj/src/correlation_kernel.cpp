#include "rwall/correlation_kernel.hpp"

#include "rwall/transition_kernels.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace rwall {

namespace {

using boost::multiprecision::complex128;
using boost::multiprecision::float128;

template <class T>
T ipow(T base, int e) {
  T out(1);
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// J_s at complex argument by the three-term recurrence; the closed forms in
// jacobi_eval are the public reference.
template <class C>
C jacobi_recurrence(HalfIndex a, int s, const C& x) {
  C prev(1);
  if (s == 0) return prev;
  C cur = a == HalfIndex::minus ? x : C(2) * x + C(1);
  for (int j = 1; j < s; ++j) {
    C next = C(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// J_s(cos theta) by the trigonometric forms.
template <class Real>
Real jacobi_trig(HalfIndex a, int s, const Real& theta) {
  using std::cos;
  using std::sin;
  if (a == HalfIndex::minus) return cos(Real(s) * theta);
  const Real half = theta / 2;
  const Real den = sin(half);
  if (den == 0) return Real(2 * s + 1);
  return sin((Real(s) + Real(0.5)) * theta) / den;
}

// (1-x)^a (1+x)^{-1/2} dx/dtheta at x = cos theta.
template <class Real>
Real theta_weight(HalfIndex a, const Real& theta) {
  using std::cos;
  return a == HalfIndex::minus ? Real(1) : Real(1) - cos(theta);
}

void check_point(const KernelPoint& p) {
  if (p.r < 0 || p.s < 0) throw std::invalid_argument("kernel point needs r >= 0 and s >= 0");
}

template <class Real, class Complex>
KernelValue contour_impl(const KernelPoint& p1, const KernelPoint& p2, int n, double alpha_d, int n_x, int n_u,
                         double radius) {
  using std::cos;
  using std::sin;
  const Real pi = boost::math::constants::pi<Real>();
  const Real alpha(alpha_d);
  const Real beta = alpha + alpha * alpha / 2;
  const bool ind = doubled_height(p1) >= doubled_height(p2);
  const Real w1 = Real(W_weight(p1.a, p1.s));

  std::vector<Real> xs(static_cast<std::size_t>(n_x)), bx(static_cast<std::size_t>(n_x));
  Real first(0);
  for (int j = 0; j < n_x; ++j) {
    const Real theta = (Real(j) + Real(0.5)) * pi / Real(n_x);
    const Real x = cos(theta);
    const Real j1w = jacobi_trig(p1.a, p1.s, theta) * theta_weight(p1.a, theta);
    xs[static_cast<std::size_t>(j)] = x;
    bx[static_cast<std::size_t>(j)] = ipow(Real(1) / (Real(1) + beta * (Real(1) - x)), n) * ipow(x - Real(1), p1.r) * j1w;
    if (ind) first += j1w * jacobi_trig(p2.a, p2.s, theta) * ipow(x - Real(1), p1.r - p2.r);
  }
  first *= w1 / Real(n_x);

  std::vector<Complex> us(static_cast<std::size_t>(n_u)), au(static_cast<std::size_t>(n_u));
  const Real rho(radius);
  for (int k = 0; k < n_u; ++k) {
    const Real ang = Real(2) * pi * Real(k) / Real(n_u);
    const Complex u(rho * cos(ang), rho * sin(ang));
    const Complex one(1);
    us[static_cast<std::size_t>(k)] = u;
    // du / (2 pi i) = u dphi / (2 pi) on the circle.
    au[static_cast<std::size_t>(k)] = ipow(one + Complex(beta) * (one - u), n) * jacobi_recurrence(p2.a, p2.s, u) * u /
                                     ipow(u - one, p2.r) / Complex(Real(n_u));
  }
  Complex second(0);
  for (int j = 0; j < n_x; ++j) {
    Complex inner(0);
    const Complex x(xs[static_cast<std::size_t>(j)]);
    for (int k = 0; k < n_u; ++k) inner += au[static_cast<std::size_t>(k)] / (x - us[static_cast<std::size_t>(k)]);
    second += Complex(bx[static_cast<std::size_t>(j)]) * inner;
  }
  second *= Complex(w1 / Real(n_x));

  KernelValue out;
  out.value = static_cast<double>(Real(first + second.real()));
  using std::abs;
  out.imag_residue = static_cast<double>(abs(Real(second.imag())));
  out.radius = radius;
  out.accuracy_warning = out.imag_residue > kImagResidueThreshold;
  return out;
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <class Eval>
double det_of_points(const std::vector<KernelPoint>& points, unsigned threads, Eval&& eval) {
  const std::size_t m = points.size();
  std::vector<std::vector<double>> mat(m, std::vector<double>(m));
  parallel_for(m * m, threads, [&](std::size_t idx) { mat[idx / m][idx % m] = eval(points[idx / m], points[idx % m]); });
  return determinant(std::move(mat));
}

}  // namespace

KernelPoint kernel_point(int level, int s, LevelConvention convention) {
  if (s < 0) throw std::invalid_argument("kernel_point: s must be >= 0");
  const LevelLabel label = level_label(level, convention);
  return KernelPoint{label.r, label.a, s};
}

std::complex<double> jacobi_eval(HalfIndex a, int s, std::complex<double> x) {
  if (s < 0) throw std::invalid_argument("jacobi_eval: s must be >= 0");
  std::complex<double> z = x + std::sqrt(x - 1.0) * std::sqrt(x + 1.0);
  if (std::abs(z) < 1.0) z = 1.0 / z;
  if (a == HalfIndex::minus) return (std::pow(z, s) + std::pow(z, -s)) / 2.0;
  // sum_{j=-s}^{s} z^j: the closed form (z^{s+1/2} - z^{-s-1/2}) / (z^{1/2} - z^{-1/2})
  // written without half powers, continuous at z = ±1.
  std::complex<double> total = 1.0;
  std::complex<double> zp = 1.0, zm = 1.0;
  const std::complex<double> zi = 1.0 / z;
  for (int j = 1; j <= s; ++j) {
    zp *= z;
    zm *= zi;
    total += zp + zm;
  }
  return total;
}

double jacobi_eval(HalfIndex a, int s, double x) {
  if (s < 0) throw std::invalid_argument("jacobi_eval: s must be >= 0");
  if (x >= -1.0 && x <= 1.0) return jacobi_trig(a, s, std::acos(x));
  return jacobi_eval(a, s, std::complex<double>(x, 0.0)).real();
}

std::vector<double> jacobi_shifted_coefficients(HalfIndex a, int s) {
  if (s < 0) throw std::invalid_argument("jacobi_shifted_coefficients: s must be >= 0");
  // x = 1 + y; J_{j+1} = 2(1+y) J_j - J_{j-1}.
  std::vector<double> prev{1.0};
  if (s == 0) return prev;
  std::vector<double> cur = a == HalfIndex::minus ? std::vector<double>{1.0, 1.0} : std::vector<double>{3.0, 2.0};
  for (int j = 1; j < s; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t l = 0; l < cur.size(); ++l) {
      next[l] += 2.0 * cur[l];
      next[l + 1] += 2.0 * cur[l];
    }
    for (std::size_t l = 0; l < prev.size(); ++l) next[l] -= prev[l];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

int W_weight(HalfIndex a, int s) { return (s > 0 && a == HalfIndex::minus) ? 2 : 1; }

double phi_pole(double alpha) {
  const double b = phi_beta(alpha);
  return b > 0.0 ? 1.0 + 1.0 / b : std::numeric_limits<double>::infinity();
}

std::complex<double> phi_alpha(std::complex<double> x, double alpha) {
  const std::complex<double> den = 1.0 + phi_beta(alpha) * (1.0 - x);
  if (den == 0.0) throw SingularPoint("phi_alpha: evaluation at the pole x = " + std::to_string(phi_pole(alpha)));
  return 1.0 / den;
}

Precision parse_precision(const std::string& name) {
  if (name == "double") return Precision::double_precision;
  if (name == "extended") return Precision::extended;
  throw std::invalid_argument("unknown precision '" + name + "' (expected double or extended)");
}

std::string to_string(Precision p) { return p == Precision::extended ? "extended" : "double"; }

double effective_radius(const QuadratureSpec& quad, double alpha) {
  double rho = quad.contour_radius;
  const double pole = phi_pole(alpha);
  if (pole <= rho) rho = (1.0 + pole) / 2.0;
  if (!(rho > 1.0)) {
    throw std::invalid_argument("contour radius " + std::to_string(rho) + " does not enclose [-1, 1] and u = 1");
  }
  return rho;
}

double kernel_first_term(const KernelPoint& p1, const KernelPoint& p2, int n_x) {
  check_point(p1);
  check_point(p2);
  if (doubled_height(p1) < doubled_height(p2)) return 0.0;
  const double pi = boost::math::constants::pi<double>();
  double total = 0.0;
  for (int j = 0; j < n_x; ++j) {
    const double theta = (j + 0.5) * pi / n_x;
    total += jacobi_trig(p1.a, p1.s, theta) * jacobi_trig(p2.a, p2.s, theta) * theta_weight(p1.a, theta) *
             ipow(std::cos(theta) - 1.0, p1.r - p2.r);
  }
  return W_weight(p1.a, p1.s) * total / n_x;
}

KernelValue kernel_K(const KernelPoint& p1, const KernelPoint& p2, int n, double alpha, const QuadratureSpec& quad) {
  check_point(p1);
  check_point(p2);
  if (n < 0) throw std::invalid_argument("kernel_K: n must be >= 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("kernel_K: alpha must be >= 0");
  if (quad.n_x < 2 || quad.n_u < 2) throw std::invalid_argument("kernel_K: quadrature needs at least 2 nodes");
  const double rho = effective_radius(quad, alpha);
  if (quad.precision == Precision::extended) {
    return contour_impl<float128, complex128>(p1, p2, n, alpha, quad.n_x, quad.n_u, rho);
  }
  return contour_impl<double, std::complex<double>>(p1, p2, n, alpha, quad.n_x, quad.n_u, rho);
}

double kernel_K_binomial(const KernelPoint& p1, const KernelPoint& p2, int n, double alpha, double tolerance) {
  check_point(p1);
  check_point(p2);
  if (n < 0) throw std::invalid_argument("kernel_K_binomial: n must be >= 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("kernel_K_binomial: alpha must be >= 0");
  const double pi = boost::math::constants::pi<double>();
  const double beta = phi_beta(alpha);
  const bool ind = doubled_height(p1) >= doubled_height(p2);
  const std::vector<double> d = jacobi_shifted_coefficients(p2.a, p2.s);

  // F_m = P(Bin(n, p) <= m) and its complement.
  auto cdf = [n](int m, double p) {
    if (m < 0) return 0.0;
    if (m >= n) return 1.0;
    return boost::math::ibetac(m + 1.0, static_cast<double>(n - m), p);
  };
  auto sf = [n](int m, double p) {
    if (m < 0) return 1.0;
    if (m >= n) return 0.0;
    return boost::math::ibeta(m + 1.0, static_cast<double>(n - m), p);
  };

  auto integrand = [&](double theta) {
    const double x = std::cos(theta);
    const double y = beta * (1.0 - x);
    const double p = y / (1.0 + y);
    double sum = 0.0;
    double xl = 1.0;
    for (std::size_t l = 0; l < d.size(); ++l) {
      const int m = p2.r - static_cast<int>(l) - 1;
      sum += d[l] * xl * (ind ? cdf(m, p) : -sf(m, p));
      xl *= x - 1.0;
    }
    return jacobi_trig(p1.a, p1.s, theta) * theta_weight(p1.a, theta) * std::pow(x - 1.0, p1.r - p2.r) * sum;
  };

  const double total =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, pi, 15, tolerance);
  return W_weight(p1.a, p1.s) / pi * total;
}

double correlation(const std::vector<KernelPoint>& points, int n, double alpha, const QuadratureSpec& quad,
                   unsigned threads) {
  return det_of_points(points, threads,
                       [&](const KernelPoint& a, const KernelPoint& b) { return kernel_K(a, b, n, alpha, quad).value; });
}

double correlation_binomial(const std::vector<KernelPoint>& points, int n, double alpha, unsigned threads) {
  return det_of_points(points, threads,
                       [&](const KernelPoint& a, const KernelPoint& b) { return kernel_K_binomial(a, b, n, alpha); });
}

}  // namespace rwall
