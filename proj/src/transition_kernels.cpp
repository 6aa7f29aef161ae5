#include "rwall/transition_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace rwall {

namespace {

void require_length(const Partition& p, int k, const char* what) {
  if (static_cast<int>(p.size()) != particles_on_level(k)) {
    throw std::invalid_argument(std::string(what) + ": partition " + p.to_string() + " does not live on level " +
                                std::to_string(k));
  }
}

int level_of(int r, HalfIndex a) { return a == HalfIndex::plus ? 2 * r : 2 * r - 1; }

// All partitions of the given length whose first part equals `first`.
std::vector<Partition> partitions_with_first(int length, int first) {
  std::vector<Partition> out;
  if (length == 0) {
    if (first == 0) out.emplace_back();
    return out;
  }
  std::vector<int> cur(static_cast<std::size_t>(length), 0);
  cur[0] = first;
  auto rec = [&](auto&& self, int i, int bound) -> void {
    if (i == length) {
      out.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= bound; ++v) {
      cur[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, v);
    }
  };
  rec(rec, 1, first);
  return out;
}

Rational dim_ratio(int dim_index, const Partition& num, const Partition& den) {
  Rational out(dim(dim_index, num), dim(dim_index, den));
  out.canonicalize();
  return out;
}

}  // namespace

Rational reflect_R(int x, int y, const Rational& q) {
  if (x < 0 || y < 0) throw std::invalid_argument("reflect_R: sites must be nonnegative");
  Rational out = (1 - q) / (1 + q) * (pow(q, static_cast<unsigned>(std::abs(x - y))) + pow(q, static_cast<unsigned>(x + y)));
  if (y == 0) out /= 2;
  out.canonicalize();
  return out;
}

Rational psi(const Rational& m, int s, int l) {
  if (l < s) return 0;
  return s == 0 ? m : Rational(1);
}

Rational f_sm(int s, const Rational& m, int l, const Rational& q) {
  if (l < s) return 0;
  return pow(q, static_cast<unsigned>(l - s)) * psi(m, s, l);
}

Rational interlace_det(const Partition& c, const Partition& lambda, const Rational& m) {
  if (c.size() != lambda.size()) throw std::invalid_argument("interlace_det: lengths differ");
  const int r = static_cast<int>(c.size());
  std::vector<std::vector<Rational>> a(c.size(), std::vector<Rational>(c.size()));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          psi(m, c[static_cast<std::size_t>(i)] - (i + 1) + r, lambda[static_cast<std::size_t>(j)] - (j + 1) + r);
    }
  }
  return determinant(std::move(a));
}

Rational I_closed(HalfIndex a, int l, int s, const Rational& q) {
  if (a == HalfIndex::minus) return reflect_R(l, s, q);
  if (l < 0 || s < 0) throw std::invalid_argument("I_closed: indices must be nonnegative");
  Rational out = (q - 1) / (q + 1) *
                 (pow(q, static_cast<unsigned>(s + l + 1)) - pow(q, static_cast<unsigned>(std::abs(s - l))));
  out.canonicalize();
  return out;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (m[row][col] == 0) continue;
      const Rational factor = m[row][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
    }
  }
  det.canonicalize();
  return det;
}

double determinant(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (m[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = m[row][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
    }
  }
  return det;
}

std::vector<Partition> partitions_below(int k, const Partition& lambda) {
  require_length(lambda, k, "partitions_below");
  const int m = particles_on_level(k - 1);
  std::vector<Partition> out;
  std::vector<int> cur(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == m) {
      out.emplace_back(cur);
      return;
    }
    const auto ii = static_cast<std::size_t>(i);
    const int lo = ii + 1 < lambda.size() ? lambda[ii + 1] : 0;
    for (int v = lo; v <= lambda[ii]; ++v) {
      cur[ii] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

int kappa(int k, const Partition& lambda, const Partition& mu) {
  require_length(lambda, k, "kappa");
  require_length(mu, k - 1, "kappa");
  if (!interlaces(mu, lambda)) return 0;
  if (k % 2 == 1) return 1;
  return mu.last_part() == 0 ? 1 : 2;
}

BigInt DimTable::dim(int dim_index, const Partition& lambda) {
  if (dim_index < 2) throw std::invalid_argument("dim: index must be >= 2");
  require_length(lambda, dim_index - 1, "dim");
  if (dim_index == 2) return 1;
  auto key = std::make_pair(dim_index, lambda.parts());
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const int k = dim_index - 1;
  BigInt total = 0;
  for (const auto& mu : partitions_below(k, lambda)) {
    total += kappa(k, lambda, mu) * dim(dim_index - 1, mu);
  }
  std::lock_guard lock(mutex_);
  cache_.emplace(std::move(key), total);
  return total;
}

std::size_t DimTable::cached_entries() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

DimTable& DimTable::shared() {
  static DimTable table;
  return table;
}

BigInt dim(int dim_index, const Partition& lambda) { return DimTable::shared().dim(dim_index, lambda); }

Rational P_level(int k, const Partition& lambda, const Partition& beta, const Rational& q) {
  if (k < 1) throw std::invalid_argument("P_level: k must be >= 1");
  require_length(lambda, k, "P_level");
  require_length(beta, k, "P_level");
  const int m = particles_on_level(k - 1);  // length of the intermediate c

  // c_i ranges over [max(lambda_{i+1}, beta_{i+1}), min(lambda_i, beta_i)].
  std::vector<int> lo(static_cast<std::size_t>(m)), hi(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
    const int lam_next = i + 1 < lambda.size() ? lambda[i + 1] : 0;
    const int bet_next = i + 1 < beta.size() ? beta[i + 1] : 0;
    lo[i] = std::max(lam_next, bet_next);
    hi[i] = std::min(lambda[i], beta[i]);
    if (lo[i] > hi[i]) return 0;
  }
  int head = 0;  // sum over i <= m of lambda_i + beta_i
  for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) head += lambda[i] + beta[i];

  const Rational even_zero_weight = Rational(1) / (1 + q);
  Rational sum = 0;
  std::vector<int> c(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int i, int csum) -> void {
    if (i == m) {
      Rational term = pow(q, static_cast<unsigned>(head - 2 * csum));
      if (k % 2 == 0 && c.back() == 0) term *= even_zero_weight;
      sum += term;
      return;
    }
    const auto ii = static_cast<std::size_t>(i);
    for (int v = lo[ii]; v <= hi[ii]; ++v) {
      c[ii] = v;
      self(self, i + 1, csum + v);
    }
  };
  rec(rec, 0, 0);

  // Both parities carry (1-q)^{2 floor(k/2)}; odd levels add the reflected factor
  // of the bottom particle.
  Rational out = sum * pow(1 - q, static_cast<unsigned>(2 * m)) * dim_ratio(k + 1, beta, lambda);
  if (k % 2 == 1) out *= reflect_R(lambda.last_part(), beta.last_part(), q);
  out.canonicalize();
  return out;
}

Rational T_level(int r, HalfIndex a, const Partition& mu, const Partition& lambda, const Rational& q) {
  if (r < 1) throw std::invalid_argument("T_level: r must be >= 1");
  if (static_cast<int>(mu.size()) != r || static_cast<int>(lambda.size()) != r) {
    throw std::invalid_argument("T_level: partitions must have r parts");
  }
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(r), std::vector<Rational>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          I_closed(a, mu[static_cast<std::size_t>(i)] - (i + 1) + r, lambda[static_cast<std::size_t>(j)] - (j + 1) + r, q);
    }
  }
  Rational det = determinant(std::move(m));
  if (det == 0) return 0;
  const int k = level_of(r, a);
  Rational out = det * dim_ratio(k + 1, lambda, mu);
  out.canonicalize();
  return out;
}

Rational T_k(int k, const Partition& mu, const Partition& lambda, const Rational& q) {
  const LevelLabel label = level_label(k, LevelConvention::t_matrix);
  return T_level(label.r, label.a, mu, lambda, q);
}

Rational T_link(int k, const Partition& lambda, const Partition& mu) {
  const int kap = kappa(k, lambda, mu);
  if (kap == 0) return 0;
  Rational out(kap * dim(k, mu), dim(k + 1, lambda));
  out.canonicalize();
  return out;
}

TruncatedSum Delta(int k, const Partition& lambda, const Partition& mu, const Rational& q, const DeltaOptions& options) {
  if (k < 2) throw std::invalid_argument("Delta: k must be >= 2");
  require_length(lambda, k, "Delta");
  require_length(mu, k - 1, "Delta");
  const int r = particles_on_level(k);
  const bool fixed = options.cap > 0;
  const int last = fixed ? options.cap : options.max_cap;
  const int floor_cap = std::max({options.min_cap, lambda.max_part(), mu.max_part()});
  const Rational tol(options.relative_tolerance);

  TruncatedSum out;
  Rational row_sum = 0;
  for (int c = 0; c <= last; ++c) {
    for (const auto& nu : partitions_with_first(r, c)) {
      const Rational t = T_k(k, lambda, nu, q);
      if (t == 0) continue;
      row_sum += t;
      if (interlaces(mu, nu)) out.partial += t * T_link(k, nu, mu);
    }
    out.cap = c;
    out.tail_bound = 1 - row_sum;
    if (!fixed && c >= floor_cap && out.partial > 0 && out.tail_bound <= tol * out.partial) break;
  }
  if (out.tail_bound < 0) throw std::logic_error("Delta: truncated row sum of T_k exceeds one");
  out.partial.canonicalize();
  out.tail_bound.canonicalize();
  return out;
}

Rational Delta_intertwined(int k, const Partition& lambda, const Partition& mu, const Rational& q) {
  if (k < 2) throw std::invalid_argument("Delta_intertwined: k must be >= 2");
  require_length(lambda, k, "Delta_intertwined");
  require_length(mu, k - 1, "Delta_intertwined");
  Rational out = 0;
  for (const auto& kap : partitions_below(k, lambda)) {
    const Rational link = T_link(k, lambda, kap);
    if (link == 0) continue;
    out += link * T_k(k - 1, kap, mu, q);
  }
  out.canonicalize();
  return out;
}

MultilevelValue T_multilevel(const InterlacedState& from, const InterlacedState& to, const Rational& q,
                             const MultilevelOptions& options) {
  const int K = from.num_levels();
  if (to.num_levels() != K) throw std::invalid_argument("T_multilevel: states have different numbers of levels");
  if (K < 1) throw std::invalid_argument("T_multilevel: empty state");

  int min_cap = options.delta.min_cap;
  for (int k = 1; k <= K; ++k) min_cap = std::max({min_cap, from.level(k).max_part(), to.level(k).max_part()});
  DeltaOptions dopt = options.delta;
  dopt.min_cap = min_cap;

  MultilevelValue out;
  Rational lo = T_k(1, from.level(1), to.level(1), q);
  Rational hi = lo;
  out.negative_factor = lo < 0;
  for (int j = 2; j <= K; ++j) {
    const Rational num = T_k(j, from.level(j), to.level(j), q) * T_link(j, to.level(j), to.level(j - 1));
    if (num < 0) out.negative_factor = true;
    const Partition& arg = options.delta_argument == DeltaArgument::source ? from.level(j) : to.level(j);
    TruncatedSum den;
    if (options.delta_method == DeltaMethod::intertwined) {
      den.partial = Delta_intertwined(j, arg, to.level(j - 1), q);
    } else {
      den = Delta(j, arg, to.level(j - 1), q, dopt);
    }
    if (den.partial <= 0) {
      if (num == 0 && den.tail_bound == 0) {
        throw DegenerateDenominator("T_multilevel: 0/0 factor at level " + std::to_string(j));
      }
      throw DegenerateDenominator("T_multilevel: Delta^" + std::to_string(j) + "_" + std::to_string(j - 1) + "(" +
                                  arg.to_string() + ", " + to.level(j - 1).to_string() +
                                  ") vanishes on the truncated sum (from " + from.to_string() + " to " +
                                  to.to_string() + ")");
    }
    // num / Delta with Delta in [partial, partial + tail].
    const Rational a = num / (den.partial + den.tail_bound);
    const Rational b = num / den.partial;
    const Rational f_lo = std::min(a, b);
    const Rational f_hi = std::max(a, b);
    const Rational c1 = lo * f_lo, c2 = lo * f_hi, c3 = hi * f_lo, c4 = hi * f_hi;
    lo = std::min({c1, c2, c3, c4});
    hi = std::max({c1, c2, c3, c4});
  }
  lo.canonicalize();
  hi.canonicalize();
  out.lower = lo;
  out.upper = hi;
  out.value = to_double((lo + hi) / 2);
  out.error_radius = to_double((hi - lo) / 2);
  return out;
}

TransitionMatrix level_matrix(int k, const Rational& q, int cap, KernelKind kind) {
  TransitionMatrix out;
  out.index = enumerate_partitions(particles_on_level(k), cap);
  const std::size_t n = out.index.size();
  out.entries.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.entries[i][j] =
          kind == KernelKind::P ? P_level(k, out.index[i], out.index[j], q) : T_k(k, out.index[i], out.index[j], q);
    }
  }
  return out;
}

LevelDistribution evolve_level(int k, int n, const Rational& q, int cap) {
  if (n < 0) throw std::invalid_argument("evolve_level: n must be >= 0");
  if (cap < 0) cap = 4 * (n + 1);
  LevelDistribution out;
  out.index = enumerate_partitions(particles_on_level(k), cap);
  const std::size_t size = out.index.size();
  out.probabilities.assign(size, 0);
  out.probabilities[0] = 1;  // graded order puts the zero partition first
  if (n > 0) {
    const TransitionMatrix m = level_matrix(k, q, cap, KernelKind::T);
    for (int t = 0; t < n; ++t) {
      std::vector<Rational> next(size, 0);
      for (std::size_t i = 0; i < size; ++i) {
        if (out.probabilities[i] == 0) continue;
        for (std::size_t j = 0; j < size; ++j) {
          if (m.entries[i][j] != 0) next[j] += out.probabilities[i] * m.entries[i][j];
        }
      }
      for (auto& v : next) v.canonicalize();
      out.probabilities = std::move(next);
    }
  }
  Rational total = 0;
  for (const auto& p : out.probabilities) total += p;
  out.leakage = 1 - total;
  out.leakage.canonicalize();
  return out;
}

PowerMultiplier::PowerMultiplier(double q, int n, int basis_size) : n_(n), size_(basis_size) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("PowerMultiplier: q must lie in [0, 1)");
  if (n < 0 || basis_size < 1) throw std::invalid_argument("PowerMultiplier: bad n or basis size");
  // Pad the basis so that q^pad is below double resolution.
  const int pad = q > 0.0 ? static_cast<int>(std::ceil(std::log(1e-18) / std::log(q))) + 8 : 1;
  const int big = basis_size + pad;
  const auto B = static_cast<std::size_t>(big);
  const auto closed = [&](HalfIndex a, int l, int s) {
    const double c = (1 - q) / (1 + q);
    if (a == HalfIndex::minus) return c * (std::pow(q, std::abs(l - s)) + std::pow(q, l + s)) / (s == 0 ? 2.0 : 1.0);
    return -c * (std::pow(q, s + l + 1) - std::pow(q, std::abs(s - l)));
  };
  for (HalfIndex a : {HalfIndex::minus, HalfIndex::plus}) {
    std::vector<double> base(B * B), acc(B * B, 0.0);
    for (std::size_t l = 0; l < B; ++l) {
      acc[l * B + l] = 1.0;
      for (std::size_t s = 0; s < B; ++s) base[l * B + s] = closed(a, static_cast<int>(l), static_cast<int>(s));
    }
    for (int t = 0; t < n; ++t) {
      std::vector<double> next(B * B, 0.0);
      for (std::size_t l = 0; l < B; ++l) {
        for (std::size_t m = 0; m < B; ++m) {
          const double v = acc[l * B + m];
          if (v == 0.0) continue;
          for (std::size_t s = 0; s < B; ++s) next[l * B + s] += v * base[m * B + s];
        }
      }
      acc = std::move(next);
    }
    auto& dst = a == HalfIndex::minus ? minus_ : plus_;
    dst.assign(static_cast<std::size_t>(basis_size) * static_cast<std::size_t>(basis_size), 0.0);
    for (int l = 0; l < basis_size; ++l) {
      for (int s = 0; s < basis_size; ++s) {
        dst[static_cast<std::size_t>(l) * static_cast<std::size_t>(basis_size) + static_cast<std::size_t>(s)] =
            acc[static_cast<std::size_t>(l) * B + static_cast<std::size_t>(s)];
      }
    }
  }
}

double PowerMultiplier::I(HalfIndex a, int l, int s) const {
  if (l < 0 || s < 0 || l >= size_ || s >= size_) throw std::out_of_range("PowerMultiplier: index outside the basis");
  const auto& m = a == HalfIndex::minus ? minus_ : plus_;
  return m[static_cast<std::size_t>(l) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(s)];
}

double T_level_power(int k, const Partition& mu, const Partition& lambda, const PowerMultiplier& phi_n) {
  require_length(mu, k, "T_level_power");
  require_length(lambda, k, "T_level_power");
  const LevelLabel label = level_label(k, LevelConvention::t_matrix);
  const int r = label.r;
  std::vector<std::vector<double>> m(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = phi_n.I(
          label.a, mu[static_cast<std::size_t>(i)] - (i + 1) + r, lambda[static_cast<std::size_t>(j)] - (j + 1) + r);
    }
  }
  const double det = determinant(std::move(m));
  if (det == 0.0) return 0.0;
  return det * to_double(dim_ratio(k + 1, lambda, mu));
}

std::vector<InterlacedState> enumerate_states(int num_levels, int cap) {
  if (num_levels < 1) throw std::invalid_argument("enumerate_states: need at least one level");
  std::vector<std::vector<Partition>> partial;
  for (int x = 0; x <= cap; ++x) partial.push_back({Partition{x}});
  for (int k = 2; k <= num_levels; ++k) {
    const auto candidates = enumerate_partitions(particles_on_level(k), cap);
    std::vector<std::vector<Partition>> next;
    for (const auto& levels : partial) {
      for (const auto& lam : candidates) {
        if (!interlaces(levels.back(), lam)) continue;
        auto ext = levels;
        ext.push_back(lam);
        next.push_back(std::move(ext));
      }
    }
    partial = std::move(next);
  }
  std::vector<InterlacedState> out;
  out.reserve(partial.size());
  for (auto& levels : partial) out.emplace_back(std::move(levels), 0);
  return out;
}

FixedTimeLaw::FixedTimeLaw(double q, int n, int num_levels, int max_part)
    : phi_n_(q, n, max_part + particles_on_level(num_levels) + 2), num_levels_(num_levels) {}

double FixedTimeLaw::probability(const InterlacedState& state) const {
  if (state.num_levels() != num_levels_) throw std::invalid_argument("FixedTimeLaw: wrong number of levels");
  double p = T_level_power(1, Partition{0}, state.level(1), phi_n_);
  for (int j = 2; j <= num_levels_ && p != 0.0; ++j) {
    const double num = T_level_power(j, Partition::zeros(particles_on_level(j)), state.level(j), phi_n_) *
                       to_double(T_link(j, state.level(j), state.level(j - 1)));
    if (num == 0.0) return 0.0;
    const double den = T_level_power(j - 1, Partition::zeros(particles_on_level(j - 1)), state.level(j - 1), phi_n_);
    if (den == 0.0) throw DegenerateDenominator("FixedTimeLaw: vanishing denominator at level " + std::to_string(j));
    p *= num / den;
  }
  return p;
}

}  // namespace rwall
