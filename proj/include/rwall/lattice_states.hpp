#pragma once

// State-space types for the interlacing particle system: partitions, interlaced
// arrays, the shift to the simple (exclusion) process, and the height function.

#include "rwall/rational.hpp"

#include <json.hpp>

#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rwall {

/// The label a = -1/2 or a = +1/2 of the Jacobi parameter pair (a, -1/2).
enum class HalfIndex { minus = -1, plus = 1 };

inline double half_value(HalfIndex a) { return a == HalfIndex::minus ? -0.5 : 0.5; }
inline int twice(HalfIndex a) { return static_cast<int>(a); }

/// Number of particles on level k.
inline int particles_on_level(int k) { return (k + 1) / 2; }

/// Nonincreasing sequence of nonnegative integers. Stored dense, zeros included.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  static Partition zeros(int length) { return Partition(std::vector<int>(static_cast<std::size_t>(length), 0)); }

  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  int operator[](std::size_t i) const { return parts_[i]; }
  const std::vector<int>& parts() const { return parts_; }
  int sum() const;
  /// Largest part, 0 for the empty partition.
  int max_part() const { return parts_.empty() ? 0 : parts_.front(); }
  /// Smallest part, 0 for the empty partition.
  int last_part() const { return parts_.empty() ? 0 : parts_.back(); }

  auto operator<=>(const Partition&) const = default;

  /// "(3,2,0)"
  std::string to_string() const;

 private:
  std::vector<int> parts_;
};

/// Graded lexicographic order: by total size, then lexicographically.
bool graded_less(const Partition& a, const Partition& b);

/// All partitions with `length` parts, every part in [0, cap], in graded
/// lexicographic order.
std::vector<Partition> enumerate_partitions(int length, int cap);

/// mu ≺ lambda: lambda_{i+1} <= mu_i <= lambda_i for every meaningful i.
/// Requires len(lambda) - len(mu) in {0, 1}; throws std::invalid_argument otherwise.
bool interlaces(const Partition& mu, const Partition& lambda);

/// X̃_i = x_i + floor((k+1)/2) - i (1-based i). Requires len(x) = floor((k+1)/2).
std::vector<int> shift_to_simple(int level_k, std::span<const int> x);
inline std::vector<int> shift_to_simple(int level_k, const Partition& x) {
  return shift_to_simple(level_k, std::span<const int>(x.parts()));
}

/// Full configuration (λ^(1) ≺ λ^(2) ≺ ... ≺ λ^(K)) at a half-integer time.
class InterlacedState {
 public:
  InterlacedState() = default;
  /// Validates part counts and interlacing; throws std::invalid_argument.
  explicit InterlacedState(std::vector<Partition> levels, int half_steps = 0);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  /// 1-based level access.
  const Partition& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<Partition>& levels() const { return levels_; }

  /// Time in units of half steps (time = half_steps / 2).
  int half_steps() const { return half_steps_; }
  double time() const { return half_steps_ / 2.0; }

  /// Levels equal, time ignored.
  bool same_configuration(const InterlacedState& other) const { return levels_ == other.levels_; }
  bool operator==(const InterlacedState&) const = default;

  std::string to_string() const;

 private:
  std::vector<Partition> levels_;
  int half_steps_ = 0;
};

/// True when every adjacent level pair interlaces and part counts match the levels.
bool is_valid_interlaced(const std::vector<Partition>& levels);

InterlacedState densely_packed(int num_levels);

/// Number of shifted particles strictly to the right of `site` on `level`.
int height_function(const InterlacedState& state, int level, int site);

enum class LevelConvention {
  kernel_theorem,  ///< 2r + 1/2 + a = k
  t_matrix,        ///< (floor((k+1)/2), +1/2) for even k, (floor((k+1)/2), -1/2) for odd k
};

struct LevelLabel {
  int k = 1;
  int r = 0;
  HalfIndex a = HalfIndex::minus;
  bool operator==(const LevelLabel&) const = default;
};

LevelLabel level_label(int k, LevelConvention convention);

const char* to_string(LevelConvention convention);

/// q in [0,1) and alpha = 2q/(1-q), both exact.
struct ModelParams {
  Rational q;
  Rational alpha;

  static ModelParams from_q(const Rational& q);
  /// Inverse map q = alpha / (2 + alpha); alpha must be >= 0.
  static ModelParams from_alpha(const Rational& alpha);

  double q_double() const { return to_double(q); }
  double alpha_double() const { return to_double(alpha); }
};

nlohmann::ordered_json to_json(const InterlacedState& state);
InterlacedState state_from_json(const nlohmann::json& j);

}  // namespace rwall
