#pragma once

// Ensembles of independent trajectories from the densely packed state,
// empirical observables, and the statistical comparisons used by the
// verification suites.

#include "rwall/dynamics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace rwall {

struct EnsembleConfig {
  ModelParams params = ModelParams::from_q(Rational(1, 2));
  int num_levels = 1;
  int n_steps = 1;
  long num_trajectories = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  BottomRule rule = BottomRule::table_consistent;
};

unsigned resolve_threads(unsigned requested);

/// Runs trajectories 0..N-1, trajectory i on RandomStream(seed, i), and feeds
/// the final configuration to acc.observe(levels). Each worker owns an
/// accumulator made by make(); the partial accumulators are merged in worker
/// order, so integer statistics do not depend on the thread count.
template <class Acc, class Make>
Acc run_ensemble(const EnsembleConfig& cfg, Make&& make) {
  if (cfg.num_levels < 1) throw std::invalid_argument("run_ensemble: need at least one level");
  if (cfg.n_steps < 0) throw std::invalid_argument("run_ensemble: n_steps must be >= 0");
  if (cfg.num_trajectories < 1) throw std::invalid_argument("run_ensemble: need at least one trajectory");
  const unsigned threads =
      static_cast<unsigned>(std::min<long>(resolve_threads(cfg.threads), cfg.num_trajectories));
  const GeometricSampler geo(cfg.params.q_double());
  std::vector<Acc> parts;
  for (unsigned t = 0; t < threads; ++t) parts.push_back(make());
  auto work = [&](unsigned t) {
    const long begin = cfg.num_trajectories * t / threads;
    const long end = cfg.num_trajectories * (t + 1) / threads;
    const Levels start = to_levels(densely_packed(cfg.num_levels));
    NoiseDraws scratch = NoiseDraws::zeros(cfg.num_levels);
    for (long i = begin; i < end; ++i) {
      RandomStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      Levels x = start;
      for (int s = 0; s < cfg.n_steps; ++s) step_in_place(x, geo, rng, scratch, cfg.rule);
      parts[t].observe(x);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  Acc out = std::move(parts[0]);
  for (unsigned t = 1; t < threads; ++t) out.merge(parts[t]);
  return out;
}


struct SiteEstimate {
  int site = 0;
  double mean = 0;
  double std_error = 0;  ///< sample standard deviation / sqrt(N)
};

/// Fraction of trajectories with a shifted particle of level k at each site.
std::vector<SiteEstimate> empirical_level_density(const EnsembleConfig& cfg, int k, const std::vector<int>& sites);

/// Fraction of trajectories with shifted particles of level k at both s1 and s2.
SiteEstimate empirical_pair_density(const EnsembleConfig& cfg, int k, int s1, int s2);

using Histogram = std::map<std::vector<int>, long>;
using Distribution = std::map<std::vector<int>, double>;

/// Histogram of the level-k partition.
Histogram level_histogram(const EnsembleConfig& cfg, int k);

/// Histograms of every level 1..num_levels from one ensemble.
std::vector<Histogram> all_level_histograms(const EnsembleConfig& cfg);

/// Key of a multi-level state: the levels concatenated top to bottom.
std::vector<int> flatten(const Levels& x);

/// Histogram of the whole interlaced array (keys from flatten).
Histogram empirical_multilevel_histogram(const EnsembleConfig& cfg);

/// Histogram (keys from flatten) of one step from an arbitrary state, sample i
/// on RandomStream(seed, i).
Histogram one_step_histogram(const InterlacedState& from, const ModelParams& params, long count, std::uint64_t seed,
                             BottomRule rule = BottomRule::table_consistent);

/// Normalized frequencies.
Distribution normalize(const Histogram& h);

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct TestStatistic {
  std::string test;
  std::string statistic_name;
  double statistic = 0;
  double threshold = 0;
  double p_value = 1;
  int dof = 0;
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

struct ChiSquareOptions {
  double p_fail = 1e-3;         ///< p below this fails
  double min_expected = 5.0;    ///< bins with smaller expected counts are pooled
};

/// Goodness of fit of observed counts to exact probabilities. Observations
/// outside the reference support fail outright.
TestStatistic chi_square_exact(const Histogram& observed, const Distribution& expected,
                               const ChiSquareOptions& options = {});

/// Homogeneity test of two histograms (2 x B contingency table).
TestStatistic chi_square_two_sample(const Histogram& a, const Histogram& b, const ChiSquareOptions& options = {});

/// |x - mu| <= z * se, with z = 4 by default.
TestStatistic within_standard_errors(const std::string& test, double observed, double std_error, double reference,
                                     double z = 4.0);

double total_variation(const Distribution& p, const Distribution& q);

/// Quantile of TV(empirical, reference) over multinomial resamples of size N
/// drawn from the reference: the sampling bound for a TV test.
double tv_sampling_bound(const Distribution& reference, long N, double quantile = 0.99, int replicates = 200,
                         std::uint64_t seed = 1);

/// Why the dynamics can never move `from` to `to` in one step, if a
/// draw-independent bound forbids it: every particle with a partner on the
/// level above satisfies X^k_i(n+1) >= X^{k-1}_i(n).
std::optional<std::string> structural_obstruction(const InterlacedState& from, const InterlacedState& to);

/// Verification report entry: test name, statistic, threshold, verdict, seed, runtime.
nlohmann::ordered_json to_json(const TestStatistic& t, std::uint64_t seed, double runtime_seconds);

}  // namespace rwall
