#pragma once

// Correlation kernel K(r1,a1,s1; r2,a2,s2) of the single-level fixed-time
// point processes and finite correlation functions det[K].

#include "rwall/lattice_states.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwall {

class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct KernelPoint {
  int r = 1;
  HalfIndex a = HalfIndex::minus;
  int s = 0;  ///< site of the shifted process
};

/// Kernel label of site s on level k under the given level convention.
KernelPoint kernel_point(int level, int s, LevelConvention convention = LevelConvention::t_matrix);

/// 2r + a with a = ±1/2 doubled, i.e. 2(2r + a): orders points by level.
inline int doubled_height(const KernelPoint& p) { return 4 * p.r + twice(p.a); }

/// J_s^{(a,-1/2)}(x) through x = (z + 1/z)/2, |z| >= 1.
std::complex<double> jacobi_eval(HalfIndex a, int s, std::complex<double> x);
double jacobi_eval(HalfIndex a, int s, double x);

/// Coefficients d_l of J_s^{(a,-1/2)}(x) = sum_l d_l (x - 1)^l.
std::vector<double> jacobi_shifted_coefficients(HalfIndex a, int s);

int W_weight(HalfIndex a, int s);

/// beta = alpha + alpha^2/2, so that phi_alpha(x) = 1 / (1 + beta (1 - x)).
inline double phi_beta(double alpha) { return alpha + alpha * alpha / 2.0; }
/// Real pole 1 + 1/beta of phi_alpha (infinite for alpha = 0).
double phi_pole(double alpha);
std::complex<double> phi_alpha(std::complex<double> x, double alpha);

enum class Precision { double_precision, extended };

Precision parse_precision(const std::string& name);
std::string to_string(Precision p);

struct QuadratureSpec {
  int n_x = 512;
  int n_u = 512;
  double contour_radius = 1.5;
  Precision precision = Precision::double_precision;
};

/// Contour radius actually used: the requested one, shrunk to (1 + x*)/2 when
/// the pole x* of phi_alpha is not beyond it. Throws if the result is <= 1.
double effective_radius(const QuadratureSpec& quad, double alpha);

struct KernelValue {
  double value = 0;
  double imag_residue = 0;  ///< |imaginary part| of the contour sum
  double radius = 0;
  bool accuracy_warning = false;  ///< imag_residue above the threshold
};

inline constexpr double kImagResidueThreshold = 1e-8;

/// K by the double integral: trapezoid in theta (x = cos theta) times the
/// periodic trapezoid on |u| = radius.
KernelValue kernel_K(const KernelPoint& p1, const KernelPoint& p2, int n, double alpha, const QuadratureSpec& quad = {});

/// First (single-integral) term of K alone.
double kernel_first_term(const KernelPoint& p1, const KernelPoint& p2, int n_x = 512);

/// K after evaluating the u-integral by residues: the phi^n ratio collapses to
/// binomial distribution functions in p = beta(1-x) / (1 + beta(1-x)). Stable
/// for large n, where the contour sum cancels catastrophically.
double kernel_K_binomial(const KernelPoint& p1, const KernelPoint& p2, int n, double alpha, double tolerance = 1e-13);

/// det[K(p_i, p_j)], matrix filled on up to `threads` workers (0 = hardware).
double correlation(const std::vector<KernelPoint>& points, int n, double alpha, const QuadratureSpec& quad = {},
                   unsigned threads = 0);

/// Same with the binomial route.
double correlation_binomial(const std::vector<KernelPoint>& points, int n, double alpha, unsigned threads = 0);

}  // namespace rwall
