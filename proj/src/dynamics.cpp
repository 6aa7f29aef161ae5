#include "rwall/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwall {

namespace {

constexpr int kInfinity = std::numeric_limits<int>::max();

}  // namespace

NoiseDraws NoiseDraws::zeros(int num_levels) {
  NoiseDraws d;
  for (int k = 1; k <= num_levels; ++k) {
    d.left.emplace_back(static_cast<std::size_t>(particles_on_level(k)), 0);
    d.right.emplace_back(static_cast<std::size_t>(particles_on_level(k)), 0);
  }
  return d;
}

bool NoiseDraws::covers(int num_levels) const {
  if (static_cast<int>(left.size()) < num_levels || static_cast<int>(right.size()) < num_levels) return false;
  for (int k = 1; k <= num_levels; ++k) {
    const auto r = static_cast<std::size_t>(particles_on_level(k));
    if (left[static_cast<std::size_t>(k - 1)].size() < r || right[static_cast<std::size_t>(k - 1)].size() < r) {
      return false;
    }
  }
  return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL))) {}

GeometricSampler::GeometricSampler(double q) : q_(q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("geometric parameter q must lie in [0, 1)");
  if (q > 0.0) inv_log_q_ = 1.0L / std::log(static_cast<long double>(q));
}

int GeometricSampler::operator()(RandomStream& rng) const {
  if (q_ == 0.0) return 0;
  // U in (0,1) with 64-bit resolution; the smallest value is 2^-65, so the
  // tail is cut only beyond probability q^x < 2^-60.
  const long double u = (static_cast<long double>(rng.next_u64()) + 0.5L) * 0x1p-64L;
  return static_cast<int>(std::floor(std::log(u) * inv_log_q_));
}

int sample_geometric(double q, RandomStream& rng) { return GeometricSampler(q)(rng); }

NoiseDraws sample_draws(int num_levels, const GeometricSampler& geo, RandomStream& rng) {
  NoiseDraws d = NoiseDraws::zeros(num_levels);
  for (int k = 1; k <= num_levels; ++k) {
    for (auto& v : d.left[static_cast<std::size_t>(k - 1)]) v = geo(rng);
    for (auto& v : d.right[static_cast<std::size_t>(k - 1)]) v = geo(rng);
  }
  return d;
}

Levels left_halfstep(const Levels& x, const NoiseDraws& draws) {
  const int K = static_cast<int>(x.size());
  Levels half = x;
  for (int k = 1; k <= K; ++k) {
    const int r = particles_on_level(k);
    const auto& old_k = x[static_cast<std::size_t>(k - 1)];
    auto& new_k = half[static_cast<std::size_t>(k - 1)];
    if (k % 2 == 1) {
      const int above = k > 1 ? half[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(r - 2)] : kInfinity;
      new_k[static_cast<std::size_t>(r - 1)] = std::min(old_k[static_cast<std::size_t>(r - 1)], above);
    }
    for (int i = (k % 2 == 1 ? r - 1 : r); i >= 1; --i) {
      const int pushed = i >= 2 ? half[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(i - 2)] : kInfinity;
      const int block = x[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(i - 1)];
      const int xi = draws.left[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)];
      new_k[static_cast<std::size_t>(i - 1)] = std::max(block, std::min(old_k[static_cast<std::size_t>(i - 1)], pushed) - xi);
    }
  }
  return half;
}

Levels right_halfstep(const Levels& half, const Levels& before, const NoiseDraws& draws, BottomRule rule) {
  const int K = static_cast<int>(half.size());
  Levels next = half;
  const Levels& bottom_src = rule == BottomRule::table_consistent ? half : before;
  for (int k = 1; k <= K; ++k) {
    const int r = particles_on_level(k);
    const auto& half_k = half[static_cast<std::size_t>(k - 1)];
    auto& new_k = next[static_cast<std::size_t>(k - 1)];
    if (k % 2 == 1) {
      const auto ib = static_cast<std::size_t>(r - 1);
      const int base = bottom_src[static_cast<std::size_t>(k - 1)][ib];
      const int blocker = k > 1 ? bottom_src[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(r - 2)] : kInfinity;
      const int moved = std::abs(base + draws.right[static_cast<std::size_t>(k - 1)][ib] -
                                 draws.left[static_cast<std::size_t>(k - 1)][ib]);
      new_k[ib] = std::min(moved, blocker);
    }
    for (int i = 1; i <= (k % 2 == 1 ? r - 1 : r); ++i) {
      const auto ii = static_cast<std::size_t>(i - 1);
      const int blocker = i >= 2 ? half[static_cast<std::size_t>(k - 2)][static_cast<std::size_t>(i - 2)] : kInfinity;
      const int push = next[static_cast<std::size_t>(k - 2)][ii];
      const int xi = draws.right[static_cast<std::size_t>(k - 1)][ii];
      new_k[ii] = std::min(blocker, std::max(half_k[ii], push) + xi);
    }
  }
  return next;
}

Levels to_levels(const InterlacedState& state) {
  Levels out;
  out.reserve(state.levels().size());
  for (const auto& p : state.levels()) out.push_back(p.parts());
  return out;
}

namespace {

InterlacedState from_levels(const Levels& x, int half_steps) {
  std::vector<Partition> levels;
  levels.reserve(x.size());
  for (const auto& v : x) levels.emplace_back(v);
  return InterlacedState(std::move(levels), half_steps);
}

}  // namespace

InterlacedState left_halfstep(const InterlacedState& state, const NoiseDraws& draws) {
  if (state.half_steps() % 2 != 0) throw std::invalid_argument("left_halfstep: state must be at an integer time");
  if (!draws.covers(state.num_levels())) throw std::invalid_argument("left_halfstep: draws do not cover all levels");
  return from_levels(left_halfstep(to_levels(state), draws), state.half_steps() + 1);
}

InterlacedState right_halfstep(const InterlacedState& half, const InterlacedState& before, const NoiseDraws& draws,
                               BottomRule rule) {
  if (half.half_steps() % 2 != 1) throw std::invalid_argument("right_halfstep: state must be at a half-integer time");
  if (before.num_levels() != half.num_levels()) throw std::invalid_argument("right_halfstep: level count mismatch");
  if (!draws.covers(half.num_levels())) throw std::invalid_argument("right_halfstep: draws do not cover all levels");
  return from_levels(right_halfstep(to_levels(half), to_levels(before), draws, rule), half.half_steps() + 1);
}

InterlacedState step(const InterlacedState& state, const NoiseDraws& draws, BottomRule rule) {
  const InterlacedState half = left_halfstep(state, draws);
  return right_halfstep(half, state, draws, rule);
}

InterlacedState step(const InterlacedState& state, const ModelParams& params, RandomStream& rng, BottomRule rule) {
  const GeometricSampler geo(params.q_double());
  return step(state, sample_draws(state.num_levels(), geo, rng), rule);
}

std::vector<InterlacedState> simulate(const ModelParams& params, int num_levels, int n_steps, RandomStream& rng,
                                      BottomRule rule) {
  if (n_steps < 0) throw std::invalid_argument("simulate: n_steps must be >= 0");
  std::vector<InterlacedState> traj;
  traj.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.push_back(densely_packed(num_levels));
  const GeometricSampler geo(params.q_double());
  for (int t = 0; t < n_steps; ++t) {
    traj.push_back(step(traj.back(), sample_draws(num_levels, geo, rng), rule));
  }
  return traj;
}

void step_in_place(Levels& x, const GeometricSampler& geo, RandomStream& rng, NoiseDraws& scratch, BottomRule rule) {
  const int K = static_cast<int>(x.size());
  if (!scratch.covers(K)) scratch = NoiseDraws::zeros(K);
  for (int k = 1; k <= K; ++k) {
    const auto r = static_cast<std::size_t>(particles_on_level(k));
    for (std::size_t i = 0; i < r; ++i) scratch.left[static_cast<std::size_t>(k - 1)][i] = geo(rng);
    for (std::size_t i = 0; i < r; ++i) scratch.right[static_cast<std::size_t>(k - 1)][i] = geo(rng);
  }
  Levels half = left_halfstep(x, scratch);
  x = right_halfstep(half, x, scratch, rule);
}

}  // namespace rwall
