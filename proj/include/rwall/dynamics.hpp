#pragma once

// Two-half-step stochastic update of the wall particle system: left jumps at
// integer times, right jumps at half-integer times, with pushing, blocking and
// reflection of the bottom particle of each odd level at the wall.

#include "rwall/lattice_states.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace rwall {

/// Realizations of the geometric variables for one full step n -> n+1.
/// left[k-1][i-1] holds xi^k_i(n+1/2), right[k-1][i-1] holds xi^k_i(n+1).
/// For the bottom particle of an odd level both entries are consumed by the
/// right jump (|x + xi(n+1) - xi(n+1/2)|).
struct NoiseDraws {
  std::vector<std::vector<int>> left;
  std::vector<std::vector<int>> right;

  static NoiseDraws zeros(int num_levels);
  bool covers(int num_levels) const;
};

/// Which positions the bottom-particle right jump reads.
enum class BottomRule {
  /// |X(n+1/2) + xi(n+1) - xi(n+1/2)|, blocked by level k-1 at time n+1/2.
  /// Reproduces the worked example and preserves interlacing.
  table_consistent,
  /// The formula as typeset: |X(n) + xi(n+1) - xi(n+1/2)|, blocked by level
  /// k-1 at time n. Can break interlacing; kept for comparison only.
  printed,
};

/// Counter-derived random stream: the engine seed is a hash of
/// (master_seed, stream_index), so streams are independent of scheduling.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Geometric law P(x) = q^x (1-q) on {0,1,...}, sampled by inversion from a
/// 64-bit uniform. Throws std::invalid_argument for q outside [0,1).
class GeometricSampler {
 public:
  explicit GeometricSampler(double q);
  int operator()(RandomStream& rng) const;
  double q() const { return q_; }

 private:
  double q_;
  long double inv_log_q_ = 0;
};

int sample_geometric(double q, RandomStream& rng);

NoiseDraws sample_draws(int num_levels, const GeometricSampler& geo, RandomStream& rng);

/// Raw level storage, unshifted coordinates, levels[k-1][i-1] = X^k_i.
using Levels = std::vector<std::vector<int>>;

Levels left_halfstep(const Levels& x, const NoiseDraws& draws);
Levels right_halfstep(const Levels& half, const Levels& before, const NoiseDraws& draws,
                      BottomRule rule = BottomRule::table_consistent);

/// Integer time n -> n + 1/2. Requires an integer-time state.
InterlacedState left_halfstep(const InterlacedState& state, const NoiseDraws& draws);
/// Time n + 1/2 -> n + 1. `before` is the state at time n (read only by BottomRule::printed).
InterlacedState right_halfstep(const InterlacedState& half, const InterlacedState& before, const NoiseDraws& draws,
                               BottomRule rule = BottomRule::table_consistent);

InterlacedState step(const InterlacedState& state, const NoiseDraws& draws,
                     BottomRule rule = BottomRule::table_consistent);
InterlacedState step(const InterlacedState& state, const ModelParams& params, RandomStream& rng,
                     BottomRule rule = BottomRule::table_consistent);

/// trajectory[0] is densely packed, trajectory[t+1] = step(trajectory[t]).
std::vector<InterlacedState> simulate(const ModelParams& params, int num_levels, int n_steps, RandomStream& rng,
                                      BottomRule rule = BottomRule::table_consistent);

/// In-place full step on raw storage; used by the ensemble code.
void step_in_place(Levels& x, const GeometricSampler& geo, RandomStream& rng, NoiseDraws& scratch,
                   BottomRule rule = BottomRule::table_consistent);

Levels to_levels(const InterlacedState& state);

}  // namespace rwall
