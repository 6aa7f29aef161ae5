#pragma once

// Large-time limit objects: the saddle point theta, the critical curve, the
// discrete Jacobi kernel L, the symmetric Pearcey kernel, the Pearcey scaling
// map, the exponent function A(z), and finite-N convergence tables.

#include "rwall/correlation_kernel.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace rwall {

struct MacroParams {
  double t = 1.0;    ///< n / N
  double ell = 0.5;  ///< r / N
  double alpha = 1.0;
};

/// theta = 1 + 2 ell / ((ell - t)(2 alpha + alpha^2)). Throws std::domain_error at ell = t.
double theta(const MacroParams& m);

/// ell* = (1 - (1 + alpha)^{-2}) t.
double critical_curve(double t, double alpha);

/// Discrete Jacobi kernel: the orthogonality integral over [u, 1] when
/// 2 r1 + a1 >= 2 r2 + a2, minus the integral over [-1, u] otherwise.
double discrete_jacobi_L(const KernelPoint& p1, const KernelPoint& p2, double u, double tolerance = 1e-13);

struct PearceyParams {
  double sigma1 = 0;
  double eta1 = 0;
  double sigma2 = 0;
  double eta2 = 0;
};

/// Composite 64-point Gauss-Legendre layout for the Pearcey double integral.
struct PearceyQuadrature {
  int panels_per_unit = 1;
};

class PearceyAccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric Pearcey kernel. The (x, r) quarter plane, u = r e^{±i pi/4}, is
/// integrated in polar coordinates, which absorbs the 1/(u^2 - x^2)
/// singularity at the origin.
/// Throws std::invalid_argument for sigma1 < 0.
double symmetric_pearcey(const PearceyParams& p, const PearceyQuadrature& quad = {});

/// The same double integral without the sigma1 >= 0 restriction; the kernel is
/// defined on the half line, this exists to check parity of the formula.
double pearcey_formula(const PearceyParams& p, const PearceyQuadrature& quad = {});

/// The reflected Gaussian term subtracted when eta2 < eta1; 0 otherwise.
double pearcey_gaussian_term(const PearceyParams& p);

/// c_alpha = (1 + alpha)(alpha (2 + alpha))^{-1/4}.
double pearcey_c(double alpha);

struct PearceyScaling {
  int n = 0;
  int r = 0;
  int s = 0;
  double r_residual = 0;  ///< r - exact real value
  double s_residual = 0;
  double prefactor = 0;  ///< N^{1/4} / (c_alpha 2^{5/4}), sign factors excluded
};

PearceyScaling pearcey_scaling(int N, double alpha, double sigma, double eta);

/// (-2)^{r2 - r1} (-1)^{s1 - s2} N^{1/4} / (c_alpha 2^{5/4}).
double pearcey_prefactor(int N, double alpha, const KernelPoint& p1, const KernelPoint& p2);

/// How A_func treats a point on a branch cut.
enum class CutSide {
  reject,  ///< throw std::domain_error
  upper,   ///< boundary value from Im z > 0
  lower,   ///< boundary value from Im z < 0
};

/// A(z) = -t log(1 + beta (1 - z)) + ell log(z - 1), principal logs with cuts
/// where either argument is real and <= 0.
std::complex<double> A_func(std::complex<double> z, const MacroParams& m, CutSide side = CutSide::reject);

/// A(z) - A(-1), with the logs continued across the cut through z = -1.
std::complex<double> A_increment(std::complex<double> z, const MacroParams& m);

/// -alpha (2 + alpha) / (8 (1 + alpha)^4).
double A_quadratic_prediction(double alpha);

/// Taylor coefficient of A at z = -1 of the given order, by the trapezoid rule
/// for the Cauchy integral on |z + 1| = radius.
double A_taylor_coefficient(const MacroParams& m, int order, double radius = 0.5, int nodes = 256);

/// max over |z + 1| = radius of |A(z) - A(-1) - c2 (z + 1)^2| / radius^3, with
/// c2 the predicted quadratic coefficient.
double A_expansion_check(const MacroParams& m, double radius = 1e-3, int nodes = 64);

struct ConvergenceRow {
  int N = 0;
  double scaled_K = 0;
  double limit_value = 0;
  double abs_diff = 0;
};

/// Offsets of one kernel point relative to r = round(ell N).
struct PointOffset {
  int dr = 0;
  HalfIndex a = HalfIndex::minus;
  int s = 0;
};

/// Finite-N K at n = round(t N), r_i = round(ell N) + dr_i, against L(.; theta).
std::vector<ConvergenceRow> jacobi_convergence(const MacroParams& m, const PointOffset& p1, const PointOffset& p2,
                                               const std::vector<int>& Ns);

/// Finite-N kernel at the critical point (sigma = eta = 0), rescaled, against
/// the Pearcey kernel at the origin. The rescaled quantity is
/// prefactor * (1 - K): K itself tends to 1 there.
std::vector<ConvergenceRow> pearcey_convergence(double alpha, HalfIndex a, const std::vector<int>& Ns);

}  // namespace rwall
