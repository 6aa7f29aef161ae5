#include "rwall/montecarlo_stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <random>

namespace rwall {

namespace {

struct SiteCounter {
  int k;
  std::vector<int> sites;
  std::vector<long> hits;
  long total = 0;

  void observe(const Levels& x) {
    const auto shifted = shift_to_simple(k, std::span<const int>(x[static_cast<std::size_t>(k - 1)]));
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (std::find(shifted.begin(), shifted.end(), sites[j]) != shifted.end()) ++hits[j];
    }
    ++total;
  }
  void merge(const SiteCounter& o) {
    for (std::size_t j = 0; j < hits.size(); ++j) hits[j] += o.hits[j];
    total += o.total;
  }
};

struct LevelHistograms {
  std::vector<Histogram> h;
  void observe(const Levels& x) {
    for (std::size_t k = 0; k < x.size(); ++k) ++h[k][x[k]];
  }
  void merge(const LevelHistograms& o) {
    for (std::size_t k = 0; k < h.size(); ++k) {
      for (const auto& [key, c] : o.h[k]) h[k][key] += c;
    }
  }
};

struct StateHistogram {
  Histogram h;
  void observe(const Levels& x) { ++h[flatten(x)]; }
  void merge(const StateHistogram& o) {
    for (const auto& [key, c] : o.h) h[key] += c;
  }
};

SiteEstimate bernoulli_estimate(int site, long hits, long total) {
  SiteEstimate e;
  e.site = site;
  e.mean = static_cast<double>(hits) / static_cast<double>(total);
  // Sample standard deviation of 0/1 observations.
  const double var = total > 1 ? e.mean * (1.0 - e.mean) * static_cast<double>(total) / static_cast<double>(total - 1) : 0.0;
  e.std_error = std::sqrt(var / static_cast<double>(total));
  return e;
}

void check_level(const EnsembleConfig& cfg, int k) {
  if (k < 1 || k > cfg.num_levels) throw std::invalid_argument("level " + std::to_string(k) + " is not simulated");
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SiteEstimate> empirical_level_density(const EnsembleConfig& cfg, int k, const std::vector<int>& sites) {
  check_level(cfg, k);
  const auto acc = run_ensemble<SiteCounter>(cfg, [&] { return SiteCounter{k, sites, std::vector<long>(sites.size(), 0)}; });
  std::vector<SiteEstimate> out;
  for (std::size_t j = 0; j < sites.size(); ++j) out.push_back(bernoulli_estimate(sites[j], acc.hits[j], acc.total));
  return out;
}

SiteEstimate empirical_pair_density(const EnsembleConfig& cfg, int k, int s1, int s2) {
  check_level(cfg, k);
  struct PairCounter {
    int k, s1, s2;
    long hits = 0, total = 0;
    void observe(const Levels& x) {
      const auto sh = shift_to_simple(k, std::span<const int>(x[static_cast<std::size_t>(k - 1)]));
      const bool a = std::find(sh.begin(), sh.end(), s1) != sh.end();
      const bool b = std::find(sh.begin(), sh.end(), s2) != sh.end();
      if (a && b) ++hits;
      ++total;
    }
    void merge(const PairCounter& o) {
      hits += o.hits;
      total += o.total;
    }
  };
  const auto acc = run_ensemble<PairCounter>(cfg, [&] { return PairCounter{k, s1, s2}; });
  return bernoulli_estimate(s1, acc.hits, acc.total);
}

std::vector<Histogram> all_level_histograms(const EnsembleConfig& cfg) {
  return run_ensemble<LevelHistograms>(cfg, [&] {
           return LevelHistograms{std::vector<Histogram>(static_cast<std::size_t>(cfg.num_levels))};
         }).h;
}

Histogram level_histogram(const EnsembleConfig& cfg, int k) {
  check_level(cfg, k);
  return all_level_histograms(cfg)[static_cast<std::size_t>(k - 1)];
}

std::vector<int> flatten(const Levels& x) {
  std::vector<int> out;
  for (const auto& level : x) out.insert(out.end(), level.begin(), level.end());
  return out;
}

Histogram empirical_multilevel_histogram(const EnsembleConfig& cfg) {
  return run_ensemble<StateHistogram>(cfg, [] { return StateHistogram{}; }).h;
}

Histogram one_step_histogram(const InterlacedState& from, const ModelParams& params, long count, std::uint64_t seed,
                             BottomRule rule) {
  const GeometricSampler geo(params.q_double());
  const Levels start = to_levels(from);
  NoiseDraws scratch = NoiseDraws::zeros(from.num_levels());
  Histogram out;
  for (long i = 0; i < count; ++i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    Levels x = start;
    step_in_place(x, geo, rng, scratch, rule);
    ++out[flatten(x)];
  }
  return out;
}

Distribution normalize(const Histogram& h) {
  long total = 0;
  for (const auto& [k, c] : h) total += c;
  Distribution out;
  if (total == 0) return out;
  for (const auto& [k, c] : h) out[k] = static_cast<double>(c) / static_cast<double>(total);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

TestStatistic chi_square_exact(const Histogram& observed, const Distribution& expected, const ChiSquareOptions& options) {
  TestStatistic out;
  out.test = "chi_square_exact";
  out.statistic_name = "chi_square";
  out.threshold = options.p_fail;
  long total = 0;
  for (const auto& [k, c] : observed) total += c;
  if (total == 0) {
    out.note = "no observations";
    return out;
  }
  long outside = 0;
  for (const auto& [k, c] : observed) {
    auto it = expected.find(k);
    if (it == expected.end() || it->second <= 0.0) outside += c;
  }
  if (outside > 0) {
    out.verdict = Verdict::fail;
    out.p_value = 0.0;
    out.note = std::to_string(outside) + " observations outside the reference support";
    return out;
  }
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double pooled_obs = 0.0, pooled_exp = 0.0, covered = 0.0;
  for (const auto& [k, p] : expected) {
    const double e = p * static_cast<double>(total);
    covered += p;
    auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    if (e < options.min_expected) {
      pooled_obs += o;
      pooled_exp += e;
    } else {
      bins.emplace_back(o, e);
    }
  }
  // Reference mass not listed (truncation) joins the pooled bin; a pooled bin
  // that is still too small is merged into the smallest regular bin.
  pooled_exp += std::max(0.0, 1.0 - covered) * static_cast<double>(total);
  if (pooled_exp >= options.min_expected || bins.empty()) {
    bins.emplace_back(pooled_obs, pooled_exp);
  } else {
    auto smallest = std::min_element(bins.begin(), bins.end(),
                                     [](const auto& x, const auto& y) { return x.second < y.second; });
    smallest->first += pooled_obs;
    smallest->second += pooled_exp;
  }
  double chi = 0.0;
  for (const auto& [o, e] : bins) {
    if (e > 0.0) chi += (o - e) * (o - e) / e;
  }
  const int n_bins = static_cast<int>(bins.size());
  out.dof = n_bins - 1;
  out.statistic = chi;
  if (out.dof < 1) {
    out.verdict = Verdict::inconclusive;
    out.note = "fewer than two bins with expected count >= " + std::to_string(options.min_expected) +
               "; increase the number of trajectories";
    return out;
  }
  out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(out.dof), chi));
  out.verdict = out.p_value < options.p_fail ? Verdict::fail : Verdict::pass;
  return out;
}

TestStatistic chi_square_two_sample(const Histogram& a, const Histogram& b, const ChiSquareOptions& options) {
  TestStatistic out;
  out.test = "chi_square_two_sample";
  out.statistic_name = "chi_square";
  out.threshold = options.p_fail;
  double na = 0, nb = 0;
  for (const auto& [k, c] : a) na += static_cast<double>(c);
  for (const auto& [k, c] : b) nb += static_cast<double>(c);
  if (na == 0 || nb == 0) {
    out.note = "empty sample";
    return out;
  }
  std::map<std::vector<int>, std::pair<double, double>> table;
  for (const auto& [k, c] : a) table[k].first += static_cast<double>(c);
  for (const auto& [k, c] : b) table[k].second += static_cast<double>(c);
  const double n = na + nb;
  double chi = 0, pa = 0, pb = 0;
  int bins = 0;
  auto add = [&](double oa, double ob) {
    const double row = oa + ob;
    const double ea = row * na / n, eb = row * nb / n;
    chi += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    ++bins;
  };
  for (const auto& [k, v] : table) {
    const double row = v.first + v.second;
    if (row * std::min(na, nb) / n < options.min_expected) {
      pa += v.first;
      pb += v.second;
      continue;
    }
    add(v.first, v.second);
  }
  if ((pa + pb) * std::min(na, nb) / n >= options.min_expected) add(pa, pb);
  out.dof = bins - 1;
  out.statistic = chi;
  if (out.dof < 1) {
    out.verdict = Verdict::inconclusive;
    out.note = "fewer than two usable bins; increase the sample sizes";
    return out;
  }
  out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(out.dof), chi));
  out.verdict = out.p_value < options.p_fail ? Verdict::fail : Verdict::pass;
  return out;
}

TestStatistic within_standard_errors(const std::string& test, double observed, double std_error, double reference,
                                     double z) {
  TestStatistic out;
  out.test = test;
  out.statistic_name = "standard_errors";
  out.threshold = z;
  if (std_error <= 0.0) {
    out.statistic = observed == reference ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    out.statistic = std::abs(observed - reference) / std_error;
  }
  out.verdict = out.statistic <= z ? Verdict::pass : Verdict::fail;
  return out;
}

double total_variation(const Distribution& p, const Distribution& q) {
  double total = 0.0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    total += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q) {
    if (p.find(k) == p.end()) total += std::abs(v);
  }
  return total / 2.0;
}

double tv_sampling_bound(const Distribution& reference, long N, double quantile, int replicates, std::uint64_t seed) {
  if (N < 1 || replicates < 1 || !(quantile > 0.0 && quantile < 1.0)) {
    throw std::invalid_argument("tv_sampling_bound: bad arguments");
  }
  std::vector<double> probs;
  double mass = 0.0;
  for (const auto& [k, v] : reference) {
    probs.push_back(v);
    mass += v;
  }
  std::mt19937_64 engine(splitmix64(seed));
  std::vector<double> tvs;
  for (int rep = 0; rep < replicates; ++rep) {
    // Sequential conditional binomials give one multinomial draw.
    long remaining = N;
    double rest = mass;
    double tv = 0.0;
    for (double p : probs) {
      long c = 0;
      if (remaining > 0 && rest > 0.0) {
        const double frac = std::min(1.0, p / rest);
        c = std::binomial_distribution<long>(remaining, frac)(engine);
      }
      remaining -= c;
      rest -= p;
      tv += std::abs(static_cast<double>(c) / static_cast<double>(N) - p / mass);
    }
    tvs.push_back(tv / 2.0);
  }
  std::sort(tvs.begin(), tvs.end());
  const auto idx = static_cast<std::size_t>(std::ceil(quantile * replicates)) - 1;
  return tvs[std::min(idx, tvs.size() - 1)];
}

std::optional<std::string> structural_obstruction(const InterlacedState& from, const InterlacedState& to) {
  if (from.num_levels() != to.num_levels()) throw std::invalid_argument("structural_obstruction: level count mismatch");
  std::string reasons;
  for (int k = 2; k <= from.num_levels(); ++k) {
    const int partners = particles_on_level(k - 1);
    for (int i = 1; i <= partners; ++i) {
      const int bound = from.level(k - 1)[static_cast<std::size_t>(i - 1)];
      const int target = to.level(k)[static_cast<std::size_t>(i - 1)];
      if (target < bound) {
        if (!reasons.empty()) reasons += "; ";
        reasons += "X^" + std::to_string(k) + "_" + std::to_string(i) + " would end at " + std::to_string(target) +
                   " but is blocked at or above X^" + std::to_string(k - 1) + "_" + std::to_string(i) + " = " +
                   std::to_string(bound);
      }
    }
  }
  if (reasons.empty()) return std::nullopt;
  return reasons;
}

nlohmann::ordered_json to_json(const TestStatistic& t, std::uint64_t seed, double runtime_seconds) {
  nlohmann::ordered_json j;
  j["test"] = t.test;
  j["statistic"] = t.statistic;
  j["statistic_name"] = t.statistic_name;
  j["threshold"] = t.threshold;
  j["verdict"] = to_string(t.verdict);
  j["seed"] = seed;
  j["runtime"] = runtime_seconds;
  if (t.dof > 0) {
    j["dof"] = t.dof;
    j["p_value"] = t.p_value;
  }
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

}  // namespace rwall
