#include "rwall/lattice_states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rwall {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) throw std::invalid_argument("partition parts must be nonnegative");
    if (i + 1 < parts_.size() && parts_[i] < parts_[i + 1]) {
      throw std::invalid_argument("partition parts must be nonincreasing");
    }
  }
}

int Partition::sum() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ')';
  return os.str();
}

bool graded_less(const Partition& a, const Partition& b) {
  const int sa = a.sum();
  const int sb = b.sum();
  if (sa != sb) return sa < sb;
  return a.parts() < b.parts();
}

std::vector<Partition> enumerate_partitions(int length, int cap) {
  if (length < 0 || cap < 0) throw std::invalid_argument("enumerate_partitions: negative length or cap");
  std::vector<Partition> out;
  std::vector<int> cur(static_cast<std::size_t>(length), 0);
  // Recursive fill: position i takes values in [0, bound].
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
  rec(rec, 0, cap);
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

bool interlaces(const Partition& mu, const Partition& lambda) {
  if (lambda.size() != mu.size() && lambda.size() != mu.size() + 1) {
    throw std::invalid_argument("interlaces: len(lambda) must be len(mu) or len(mu)+1");
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const int lower = i + 1 < lambda.size() ? lambda[i + 1] : 0;
    if (mu[i] < lower || mu[i] > lambda[i]) return false;
  }
  return true;
}

std::vector<int> shift_to_simple(int level_k, std::span<const int> x) {
  const int r = particles_on_level(level_k);
  if (static_cast<int>(x.size()) != r) {
    throw std::invalid_argument("shift_to_simple: wrong number of particles for level");
  }
  std::vector<int> out(x.size());
  for (int i = 1; i <= r; ++i) out[static_cast<std::size_t>(i - 1)] = x[static_cast<std::size_t>(i - 1)] + r - i;
  return out;
}

bool is_valid_interlaced(const std::vector<Partition>& levels) {
  for (std::size_t k = 1; k <= levels.size(); ++k) {
    if (static_cast<int>(levels[k - 1].size()) != particles_on_level(static_cast<int>(k))) return false;
    if (k >= 2 && !interlaces(levels[k - 2], levels[k - 1])) return false;
  }
  return true;
}

InterlacedState::InterlacedState(std::vector<Partition> levels, int half_steps)
    : levels_(std::move(levels)), half_steps_(half_steps) {
  if (half_steps_ < 0) throw std::invalid_argument("InterlacedState: negative time");
  for (std::size_t k = 1; k <= levels_.size(); ++k) {
    if (static_cast<int>(levels_[k - 1].size()) != particles_on_level(static_cast<int>(k))) {
      throw std::invalid_argument("InterlacedState: level " + std::to_string(k) + " must have " +
                                  std::to_string(particles_on_level(static_cast<int>(k))) + " parts");
    }
  }
  if (!is_valid_interlaced(levels_)) throw std::invalid_argument("InterlacedState: levels do not interlace");
}

std::string InterlacedState::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < levels_.size(); ++k) os << (k ? "," : "") << levels_[k].to_string();
  os << ']';
  return os.str();
}

InterlacedState densely_packed(int num_levels) {
  if (num_levels < 1) throw std::invalid_argument("densely_packed: need at least one level");
  std::vector<Partition> levels;
  levels.reserve(static_cast<std::size_t>(num_levels));
  for (int k = 1; k <= num_levels; ++k) levels.push_back(Partition::zeros(particles_on_level(k)));
  return InterlacedState(std::move(levels), 0);
}

int height_function(const InterlacedState& state, int level, int site) {
  if (level < 1 || level > state.num_levels()) throw std::invalid_argument("height_function: level out of range");
  if (site < 0) throw std::invalid_argument("height_function: negative site");
  const auto shifted = shift_to_simple(level, state.level(level));
  return static_cast<int>(std::count_if(shifted.begin(), shifted.end(), [site](int x) { return x > site; }));
}

LevelLabel level_label(int k, LevelConvention convention) {
  if (k < 1) throw std::invalid_argument("level_label: k must be >= 1");
  if (convention == LevelConvention::t_matrix) {
    return LevelLabel{k, particles_on_level(k), k % 2 == 0 ? HalfIndex::plus : HalfIndex::minus};
  }
  // 2r + 1/2 + a = k  <=>  4r + 1 + 2a = 2k, with 2a = -1 or +1.
  if (k % 2 == 0) return LevelLabel{k, k / 2, HalfIndex::minus};
  return LevelLabel{k, (k - 1) / 2, HalfIndex::plus};
}

const char* to_string(LevelConvention convention) {
  return convention == LevelConvention::t_matrix ? "t_matrix" : "kernel_theorem";
}

ModelParams ModelParams::from_q(const Rational& q) {
  if (q < 0 || q >= 1) throw std::invalid_argument("q must lie in [0, 1), got " + rwall::to_string(q));
  Rational alpha = 2 * q / (1 - q);
  alpha.canonicalize();
  return ModelParams{q, alpha};
}

ModelParams ModelParams::from_alpha(const Rational& alpha) {
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  Rational q = alpha / (2 + alpha);
  q.canonicalize();
  return ModelParams{q, alpha};
}

nlohmann::ordered_json to_json(const InterlacedState& state) {
  nlohmann::ordered_json j;
  j["time"] = state.time();
  auto levels = nlohmann::ordered_json::array();
  for (const auto& p : state.levels()) levels.push_back(p.parts());
  j["levels"] = std::move(levels);
  return j;
}

InterlacedState state_from_json(const nlohmann::json& j) {
  const double t = j.at("time").get<double>();
  const double twice_t = 2.0 * t;
  if (twice_t < 0 || std::floor(twice_t) != twice_t) {
    throw std::invalid_argument("state_from_json: time must be a nonnegative half-integer");
  }
  std::vector<Partition> levels;
  for (const auto& lv : j.at("levels")) levels.emplace_back(lv.get<std::vector<int>>());
  return InterlacedState(std::move(levels), static_cast<int>(twice_t));
}

}  // namespace rwall
