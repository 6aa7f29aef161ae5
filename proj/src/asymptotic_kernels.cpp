#include "rwall/asymptotic_kernels.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace rwall {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

void check_macro(const MacroParams& m) {
  if (!(m.t > 0.0) || !(m.ell > 0.0)) throw std::invalid_argument("macro parameters need t > 0 and ell > 0");
  if (!(m.alpha >= 0.0)) throw std::invalid_argument("macro parameters need alpha >= 0");
}

// 64-point Gauss-Legendre rule on [-1, 1], symmetric nodes expanded.
struct Rule {
  std::vector<double> x, w;
};

const Rule& legendre64() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, 64>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

// Composite rule on [a, b] with `panels` equal panels.
void composite(const Rule& rule, double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      x.push_back(mid + 0.5 * h * rule.x[i]);
      w.push_back(0.5 * h * rule.w[i]);
    }
  }
}

}  // namespace

double theta(const MacroParams& m) {
  check_macro(m);
  if (m.ell == m.t) throw std::domain_error("theta is undefined at ell = t");
  return 1.0 + 2.0 * m.ell / ((m.ell - m.t) * (2.0 * m.alpha + m.alpha * m.alpha));
}

double critical_curve(double t, double alpha) {
  if (!(t > 0.0)) throw std::invalid_argument("critical_curve: t must be > 0");
  return (1.0 - 1.0 / ((1.0 + alpha) * (1.0 + alpha))) * t;
}

double discrete_jacobi_L(const KernelPoint& p1, const KernelPoint& p2, double u, double tolerance) {
  if (!(u > -1.0 && u < 1.0)) throw std::invalid_argument("discrete_jacobi_L: u must lie in (-1, 1)");
  if (p1.r < 0 || p2.r < 0 || p1.s < 0 || p2.s < 0) throw std::invalid_argument("discrete_jacobi_L: bad point");
  const bool upper = doubled_height(p1) >= doubled_height(p2);
  const int dr = p1.r - p2.r;
  auto f = [&](double th) {
    const double x = std::cos(th);
    const double w = p1.a == HalfIndex::minus ? 1.0 : 1.0 - x;
    return jacobi_eval(p1.a, p1.s, x) * jacobi_eval(p2.a, p2.s, x) * std::pow(x - 1.0, dr) * w;
  };
  // x in [u, 1] is theta in [0, acos u].
  const double tu = std::acos(u);
  const double lo = upper ? 0.0 : tu;
  const double hi = upper ? tu : kPi;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, tolerance);
  const double value = W_weight(p1.a, p1.s) / kPi * integral;
  return upper ? value : -value;
}

double symmetric_pearcey(const PearceyParams& p, const PearceyQuadrature& quad) {
  if (p.sigma1 < 0.0) throw std::invalid_argument("symmetric_pearcey: sigma1 must be >= 0");
  return pearcey_formula(p, quad);
}

double pearcey_formula(const PearceyParams& p, const PearceyQuadrature& quad) {
  if (quad.panels_per_unit < 1) throw std::invalid_argument("symmetric_pearcey: bad quadrature");
  // exp(-x^4 - eta1 x^2) peaks at exp(eta1^2 / 4) for eta1 < 0, and
  // cos(sigma2 u) grows like exp(sigma2 r / sqrt 2); beyond these the double
  // sum loses all digits to cancellation.
  const double growth = (p.eta1 < 0.0 ? p.eta1 * p.eta1 / 4.0 : 0.0) + std::abs(p.sigma2) * 2.0;
  if (growth > 25.0 || std::abs(p.sigma1) > 40.0 || std::abs(p.eta2) > 60.0) {
    throw PearceyAccuracyError("symmetric_pearcey: parameters outside the reliable range; keep eta1 >= -10, "
                               "|sigma2| <= 12, sigma1 <= 40, |eta2| <= 60");
  }
  const double X = std::max(4.0, std::sqrt(2.0 * std::abs(p.eta1)) + 4.0);
  const double R = std::max(4.0, std::sqrt(2.0 * std::abs(p.eta2)) + 4.0);
  const double rho_max = std::hypot(X, R);

  const Rule& rule = legendre64();
  std::vector<double> rx, rw, px, pw;
  composite(rule, 0.0, rho_max, static_cast<int>(std::ceil(rho_max)) * quad.panels_per_unit, rx, rw);
  composite(rule, 0.0, kPi / 2.0, 2 * quad.panels_per_unit, px, pw);

  const std::complex<double> e(std::cos(kPi / 4.0), std::sin(kPi / 4.0));
  double total = 0.0;
  for (std::size_t j = 0; j < px.size(); ++j) {
    const double c = std::cos(px[j]), s = std::sin(px[j]);
    // u / (u^2 - x^2) * rho with u = rho s e, x = rho c: independent of rho.
    const std::complex<double> shape = s * e / (s * s * std::complex<double>(0.0, 1.0) - c * c);
    double inner = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
      const double x = rx[i] * c, r = rx[i] * s;
      const std::complex<double> u = r * e;
      const std::complex<double> u2 = u * u;
      const std::complex<double> g = std::exp(-p.eta1 * x * x + p.eta2 * u2 + u2 * u2 - x * x * x * x) *
                                     std::cos(p.sigma1 * x) * std::cos(p.sigma2 * u) * shape * e;
      inner += rw[i] * g.imag();
    }
    total += pw[j] * inner;
  }
  return -4.0 / (kPi * kPi) * total - pearcey_gaussian_term(p);
}

double pearcey_gaussian_term(const PearceyParams& p) {
  if (!(p.eta2 < p.eta1)) return 0.0;
  const double d = p.eta2 - p.eta1;
  return (std::exp((p.sigma1 + p.sigma2) * (p.sigma1 + p.sigma2) / (4.0 * d)) +
          std::exp((p.sigma1 - p.sigma2) * (p.sigma1 - p.sigma2) / (4.0 * d))) /
         (2.0 * std::sqrt(kPi * -d));
}

double pearcey_c(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pearcey_c: alpha must be > 0");
  return (1.0 + alpha) * std::pow(alpha * (2.0 + alpha), -0.25);
}

PearceyScaling pearcey_scaling(int N, double alpha, double sigma, double eta) {
  if (N < 1) throw std::invalid_argument("pearcey_scaling: N must be >= 1");
  const double c = pearcey_c(alpha);
  const double s_exact = std::pow(2.0, -1.25) * sigma / c * std::pow(N, 0.25);
  const double r_exact = critical_curve(1.0, alpha) * N + std::pow(2.0, -0.5) * eta * std::sqrt(static_cast<double>(N));
  PearceyScaling out;
  out.n = N;
  out.s = static_cast<int>(std::lround(s_exact));
  out.r = static_cast<int>(std::lround(r_exact));
  if (out.s < 0 || out.r < 0) throw std::domain_error("pearcey_scaling: (sigma, eta) give a negative site or level");
  out.s_residual = out.s - s_exact;
  out.r_residual = out.r - r_exact;
  out.prefactor = std::pow(N, 0.25) / (c * std::pow(2.0, 1.25));
  return out;
}

double pearcey_prefactor(int N, double alpha, const KernelPoint& p1, const KernelPoint& p2) {
  const double sign = ((p1.s - p2.s) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(-2.0, p2.r - p1.r) * std::pow(N, 0.25) / (pearcey_c(alpha) * std::pow(2.0, 1.25));
}

std::complex<double> A_func(std::complex<double> z, const MacroParams& m, CutSide side) {
  check_macro(m);
  const double b = phi_beta(m.alpha);
  const std::complex<double> a1 = 1.0 + b * (1.0 - z);
  const std::complex<double> a2 = z - 1.0;
  // Moving z up moves a2 up and a1 down.
  auto log_on = [side](std::complex<double> w, int direction) {
    if (w.imag() != 0.0 || w.real() > 0.0) return std::log(w);
    if (w.real() == 0.0 || side == CutSide::reject) throw std::domain_error("A_func: z lies on a branch cut");
    const double sign = (side == CutSide::upper ? 1.0 : -1.0) * direction;
    return std::complex<double>(std::log(-w.real()), sign * kPi);
  };
  return -m.t * log_on(a1, b > 0.0 ? -1 : 1) + m.ell * log_on(a2, 1);
}

std::complex<double> A_increment(std::complex<double> z, const MacroParams& m) {
  check_macro(m);
  const double b = phi_beta(m.alpha);
  const std::complex<double> a1 = (1.0 + b * (1.0 - z)) / (1.0 + 2.0 * b);
  const std::complex<double> a2 = (1.0 - z) / 2.0;
  if ((a1.imag() == 0.0 && a1.real() <= 0.0) || (a2.imag() == 0.0 && a2.real() <= 0.0)) {
    throw std::domain_error("A_increment: z lies on a branch cut");
  }
  return -m.t * std::log(a1) + m.ell * std::log(a2);
}

double A_quadratic_prediction(double alpha) {
  return -alpha * (2.0 + alpha) / (8.0 * std::pow(1.0 + alpha, 4));
}

double A_taylor_coefficient(const MacroParams& m, int order, double radius, int nodes) {
  if (order < 0 || nodes < 4 || !(radius > 0.0)) throw std::invalid_argument("A_taylor_coefficient: bad arguments");
  std::complex<double> total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double ph = 2.0 * kPi * k / nodes;
    const std::complex<double> w(std::cos(ph), std::sin(ph));
    total += A_increment(-1.0 + radius * w, m) * std::pow(w, -order);
  }
  return (total / static_cast<double>(nodes)).real() / std::pow(radius, order);
}

double A_expansion_check(const MacroParams& m, double radius, int nodes) {
  const double c2 = A_quadratic_prediction(m.alpha);
  double worst = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double ph = 2.0 * kPi * (k + 0.5) / nodes;
    const std::complex<double> h = radius * std::complex<double>(std::cos(ph), std::sin(ph));
    worst = std::max(worst, std::abs(A_increment(-1.0 + h, m) - c2 * h * h) / std::pow(radius, 3));
  }
  return worst;
}

std::vector<ConvergenceRow> jacobi_convergence(const MacroParams& m, const PointOffset& p1, const PointOffset& p2,
                                               const std::vector<int>& Ns) {
  const double th = theta(m);
  std::vector<ConvergenceRow> rows;
  for (int N : Ns) {
    const int r = static_cast<int>(std::lround(m.ell * N));
    const int n = static_cast<int>(std::lround(m.t * N));
    const KernelPoint k1{r + p1.dr, p1.a, p1.s}, k2{r + p2.dr, p2.a, p2.s};
    ConvergenceRow row;
    row.N = N;
    row.scaled_K = kernel_K_binomial(k1, k2, n, m.alpha);
    if (th > -1.0 && th < 1.0) {
      row.limit_value = discrete_jacobi_L(k1, k2, th);
    } else {
      // Frozen side (theta <= -1): the limit is the identity kernel.
      row.limit_value = (k1.r == k2.r && k1.a == k2.a && k1.s == k2.s) ? 1.0 : 0.0;
    }
    row.abs_diff = std::abs(row.scaled_K - row.limit_value);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> pearcey_convergence(double alpha, HalfIndex a, const std::vector<int>& Ns) {
  const double limit = symmetric_pearcey(PearceyParams{});
  std::vector<ConvergenceRow> rows;
  for (int N : Ns) {
    const PearceyScaling sc = pearcey_scaling(N, alpha, 0.0, 0.0);
    const KernelPoint p{sc.r, a, sc.s};
    ConvergenceRow row;
    row.N = N;
    row.scaled_K = pearcey_prefactor(N, alpha, p, p) * (1.0 - kernel_K_binomial(p, p, sc.n, alpha));
    row.limit_value = limit;
    row.abs_diff = std::abs(row.scaled_K - limit);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rwall
