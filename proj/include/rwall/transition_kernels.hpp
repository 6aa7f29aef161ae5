#pragma once

// Exact transition kernels of the wall particle system and of the Jacobi
// multiplier chain: the reflected kernel R, single-level kernels P_k and
// T_k, dimensions by branching, the links between adjacent levels, and the
// multi-level product kernel.

#include "rwall/lattice_states.hpp"
#include "rwall/rational.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rwall {

/// Raised when a multi-level factor has a vanishing denominator.
class DegenerateDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One-particle kernel with reflection at 0: the law of |x + xi - xi'|.
Rational reflect_R(int x, int y, const Rational& q);

Rational psi(const Rational& m, int s, int l);
/// f_{s,m}(l) = q^{l-s} psi_m(s, l).
Rational f_sm(int s, const Rational& m, int l, const Rational& q);

/// det[psi_m(c_i - i + r, lambda_j - j + r)], c and lambda of equal length r.
Rational interlace_det(const Partition& c, const Partition& lambda, const Rational& m);

/// Matrix elements of multiplication by phi_alpha, alpha = 2q/(1-q), in the
/// Jacobi (a, -1/2) basis. I_{-1/2}(l, s) = R(l, s).
Rational I_closed(HalfIndex a, int l, int s, const Rational& q);

Rational determinant(std::vector<std::vector<Rational>> m);
double determinant(std::vector<std::vector<double>> m);

/// dim_N(lambda) for lambda on level N-1, by the branching recursion
/// dim_2 = 1, dim_{k+1}(lambda) = sum_mu kappa^k_{k-1}(lambda, mu) dim_k(mu).
/// Memoized; safe to call from several threads.
class DimTable {
 public:
  BigInt dim(int dim_index, const Partition& lambda);
  std::size_t cached_entries() const;

  static DimTable& shared();

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<int, std::vector<int>>, BigInt> cache_;
};

BigInt dim(int dim_index, const Partition& lambda);

/// Branching multiplicity between lambda on level k and mu on level k-1.
int kappa(int k, const Partition& lambda, const Partition& mu);

/// All mu on level k-1 with mu ≺ lambda (lambda on level k).
std::vector<Partition> partitions_below(int k, const Partition& lambda);

/// One-step transition probability of level k of the particle system.
Rational P_level(int k, const Partition& lambda, const Partition& beta, const Rational& q);

/// T^phi_{r,a}(mu, lambda) for phi = phi_alpha; mu, lambda of length r.
/// The pair (r, a) is the level k = 2r - 1/2 + a; dims use index k + 1.
Rational T_level(int r, HalfIndex a, const Partition& mu, const Partition& lambda, const Rational& q);

/// T_k^phi, i.e. T_level at the t_matrix label of level k.
Rational T_k(int k, const Partition& mu, const Partition& lambda, const Rational& q);

/// T^k_{k-1}(lambda, mu) = dim_k(mu) / dim_{k+1}(lambda) * kappa.
Rational T_link(int k, const Partition& lambda, const Partition& mu);

struct TruncatedSum {
  Rational partial;     ///< sum over the retained terms
  Rational tail_bound;  ///< rigorous upper bound on the omitted (nonnegative) terms
  int cap = 0;          ///< largest first part retained
};

struct DeltaOptions {
  /// Fixed truncation of nu_1; 0 selects the cap adaptively.
  int cap = 0;
  /// Adaptive stop: tail_bound <= relative_tolerance * partial.
  double relative_tolerance = 1e-15;
  /// The adaptive search never stops below this cap.
  int min_cap = 0;
  int max_cap = 400;
};

/// Delta^k_{k-1}(lambda, mu) = sum_nu T_k(lambda, nu) T^k_{k-1}(nu, mu), with nu_1
/// truncated. The tail is bounded by 1 - sum_{nu_1 <= cap} T_k(lambda, nu),
/// since T_k is stochastic and T^k_{k-1} <= 1.
TruncatedSum Delta(int k, const Partition& lambda, const Partition& mu, const Rational& q,
                   const DeltaOptions& options = {});

/// Finite form sum_kappa T^k_{k-1}(lambda, kappa) T_{k-1}(kappa, mu) of the same
/// quantity, valid by the intertwining of the single-level kernels with the links.
Rational Delta_intertwined(int k, const Partition& lambda, const Partition& mu, const Rational& q);

/// Which level-j partition the multi-level denominator Delta^j_{j-1}(., lambda^(j-1)) reads.
enum class DeltaArgument {
  source,  ///< Delta(mu^(j), lambda^(j-1)); rows sum to one
  printed, ///< Delta(lambda^(j), lambda^(j-1)), as typeset
};

struct MultilevelValue {
  Rational lower;  ///< rigorous enclosure of the true value
  Rational upper;
  double value = 0;         ///< midpoint
  double error_radius = 0;  ///< half-width of the enclosure
  bool negative_factor = false;  ///< some numerator T_j came out negative
};

enum class DeltaMethod {
  intertwined,  ///< exact finite sum via Delta_intertwined
  truncated,    ///< truncated series with a rigorous tail enclosure
};

struct MultilevelOptions {
  DeltaArgument delta_argument = DeltaArgument::source;
  DeltaMethod delta_method = DeltaMethod::intertwined;
  DeltaOptions delta;  ///< used by DeltaMethod::truncated
};

/// Multi-level kernel T^phi(from, to) for phi = phi_alpha. Throws
/// DegenerateDenominator when a denominator vanishes while its numerator does not.
MultilevelValue T_multilevel(const InterlacedState& from, const InterlacedState& to, const Rational& q,
                             const MultilevelOptions& options = {});

/// Exact matrix over a truncated index set (all parts <= cap), graded-lex order.
struct TransitionMatrix {
  std::vector<Partition> index;
  std::vector<std::vector<Rational>> entries;  ///< entries[row][col]

  std::size_t size() const { return index.size(); }
};

enum class KernelKind { P, T };

TransitionMatrix level_matrix(int k, const Rational& q, int cap, KernelKind kind = KernelKind::T);

struct LevelDistribution {
  std::vector<Partition> index;
  std::vector<Rational> probabilities;
  Rational leakage;  ///< 1 - sum(probabilities): mass lost to the truncation
};

/// Row at the zero partition of (T_k)^n on partitions with parts <= cap.
/// cap < 0 selects the default 4(n+1).
LevelDistribution evolve_level(int k, int n, const Rational& q, int cap = -1);

/// Numerical matrix elements of multiplication by phi_alpha^n, obtained as the
/// n-th power of the closed-form matrices on a truncated basis. Used for the
/// fixed-time multi-level law T^{phi^n}(0, .).
class PowerMultiplier {
 public:
  PowerMultiplier(double q, int n, int basis_size);

  double I(HalfIndex a, int l, int s) const;
  int n() const { return n_; }
  int basis_size() const { return size_; }

 private:
  int n_;
  int size_;
  std::vector<double> minus_;
  std::vector<double> plus_;
};

double T_level_power(int k, const Partition& mu, const Partition& lambda, const PowerMultiplier& phi_n);

/// All interlaced arrays with `num_levels` levels and every part <= cap.
std::vector<InterlacedState> enumerate_states(int num_levels, int cap);

/// Fixed-time multi-level law T^{phi_alpha^n}(0, .) started from the densely
/// packed state, in doubles, for states whose parts do not exceed max_part.
/// The denominators from the zero state collapse by intertwining to
/// Delta^j_{j-1}(0, mu) = T_{j-1}(0, mu).
class FixedTimeLaw {
 public:
  FixedTimeLaw(double q, int n, int num_levels, int max_part);

  double probability(const InterlacedState& state) const;
  int n() const { return phi_n_.n(); }

 private:
  PowerMultiplier phi_n_;
  int num_levels_;
};

}  // namespace rwall
