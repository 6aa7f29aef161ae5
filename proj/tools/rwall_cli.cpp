// rwall: simulate the wall particle system, print exact transition matrices,
// kernel tables, asymptotic comparisons and run the verification suites.
// Exit codes: 0 success, 1 verification failure or runtime error, 2 usage error.

#include "rwall/asymptotic_kernels.hpp"
#include "rwall/correlation_kernel.hpp"
#include "rwall/dynamics.hpp"
#include "rwall/montecarlo_stats.hpp"
#include "rwall/transition_kernels.hpp"
#include "rwall/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Output sink: a file when --out is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  std::string q;
  std::string alpha;
  std::uint64_t seed = 20111;
  unsigned threads = 0;
  std::string out;
  std::string format;
};

rwall::ModelParams model_params(const Common& c, const std::string& fallback_q = "") {
  if (!c.alpha.empty()) return rwall::ModelParams::from_alpha(rwall::parse_rational(c.alpha));
  if (!c.q.empty()) return rwall::ModelParams::from_q(rwall::parse_rational(c.q));
  if (!fallback_q.empty()) return rwall::ModelParams::from_q(rwall::parse_rational(fallback_q));
  throw UsageError("one of --q or --alpha is required");
}

void add_model_flags(CLI::App* app, Common& c) {
  auto* q = app->add_option("--q", c.q, "geometric parameter, exact rational such as 1/2, in [0, 1)");
  auto* a = app->add_option("--alpha", c.alpha, "alpha = 2q/(1-q) as a rational, alternative to --q");
  q->excludes(a);
  a->excludes(q);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  int levels = 3;
  int steps = 10;
  long trajectories = 1;
  std::string rule = "table";
};

rwall::BottomRule parse_rule(const std::string& s) {
  if (s == "table") return rwall::BottomRule::table_consistent;
  if (s == "printed") return rwall::BottomRule::printed;
  throw UsageError("unknown bottom rule '" + s + "'");
}

int run_simulate(const SimulateArgs& a) {
  const rwall::ModelParams params = model_params(a.common);
  const rwall::BottomRule rule = parse_rule(a.rule);
  const std::string format = a.common.format.empty() ? "jsonl" : a.common.format;
  Output out(a.common.out);
  std::ostream& os = out.stream();
  const bool many = a.trajectories > 1;
  if (format == "csv") os << (many ? "trajectory," : "") << "time,level,index,shifted_position\n";
  ojson all = ojson::array();
  for (long t = 0; t < a.trajectories; ++t) {
    rwall::RandomStream rng(a.common.seed, static_cast<std::uint64_t>(t));
    const auto traj = rwall::simulate(params, a.levels, a.steps, rng, rule);
    for (const auto& state : traj) {
      if (format == "jsonl") {
        ojson j = rwall::to_json(state);
        if (many) j["trajectory"] = t;
        os << j.dump() << "\n";
      } else if (format == "json") {
        ojson j = rwall::to_json(state);
        if (many) j["trajectory"] = t;
        all.push_back(j);
      } else {
        for (int k = 1; k <= state.num_levels(); ++k) {
          const auto shifted = rwall::shift_to_simple(k, state.level(k));
          for (std::size_t i = 0; i < shifted.size(); ++i) {
            if (many) os << t << ",";
            os << state.time() << "," << k << "," << i + 1 << "," << shifted[i] << "\n";
          }
        }
      }
    }
  }
  if (format == "json") {
    ojson report;
    report["config"] = {{"q", rwall::to_string(params.q)}, {"levels", a.levels}, {"steps", a.steps},
                        {"trajectories", a.trajectories}, {"seed", a.common.seed}, {"bottom_rule", a.rule}};
    report["states"] = all;
    os << report.dump(2) << "\n";
  }
  return 0;
}

// -------------------------------------------------------------- transition

struct TransitionArgs {
  Common common;
  int level = 1;
  int levels = 0;
  int cap = 3;
  std::string kind = "T";
};

int run_transition(const TransitionArgs& a) {
  const rwall::ModelParams params = model_params(a.common);
  const std::string format = a.common.format.empty() ? "csv" : a.common.format;
  if (format == "jsonl") throw UsageError("transition supports --format csv or json");
  Output out(a.common.out);
  std::ostream& os = out.stream();
  ojson config{{"q", rwall::to_string(params.q)}, {"kind", a.kind}, {"cap", a.cap}};

  if (a.kind == "multilevel") {
    if (a.levels < 1) throw UsageError("--kind multilevel needs --levels >= 1");
    config["levels"] = a.levels;
    const auto from = rwall::densely_packed(a.levels);
    const auto states = rwall::enumerate_states(a.levels, a.cap);
    ojson rows = ojson::array();
    if (format == "csv") os << "from,to,lower_num,lower_den,upper_num,upper_den,value\n";
    for (const auto& to : states) {
      const auto v = rwall::T_multilevel(from, to, params.q);
      const std::string fs = rwall::to_json(from)["levels"].dump(), ts = rwall::to_json(to)["levels"].dump();
      if (format == "csv") {
        os << quoted(fs) << "," << quoted(ts) << "," << v.lower.get_num().get_str() << ","
           << v.lower.get_den().get_str() << "," << v.upper.get_num().get_str() << "," << v.upper.get_den().get_str()
           << "," << v.value << "\n";
      } else {
        rows.push_back({{"from", rwall::to_json(from)["levels"]}, {"to", rwall::to_json(to)["levels"]},
                        {"lower", rwall::to_string(v.lower)}, {"upper", rwall::to_string(v.upper)},
                        {"value", v.value}, {"negative_factor", v.negative_factor}});
      }
    }
    if (format == "json") os << ojson{{"config", config}, {"rows", rows}}.dump(2) << "\n";
    return 0;
  }

  rwall::KernelKind kind;
  if (a.kind == "P") {
    kind = rwall::KernelKind::P;
  } else if (a.kind == "T") {
    kind = rwall::KernelKind::T;
  } else {
    throw UsageError("--kind must be P, T or multilevel");
  }
  if (a.level < 1) throw UsageError("--level must be >= 1");
  config["level"] = a.level;
  const rwall::TransitionMatrix m = rwall::level_matrix(a.level, params.q, a.cap, kind);
  if (format == "csv") {
    os << "lambda,beta,value_num,value_den\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        const auto& v = m.entries[i][j];
        os << quoted(m.index[i].to_string()) << "," << quoted(m.index[j].to_string()) << ","
           << v.get_num().get_str() << "," << v.get_den().get_str() << "\n";
      }
    }
  } else {
    ojson index = ojson::array(), matrix = ojson::array();
    for (const auto& p : m.index) index.push_back(p.parts());
    for (const auto& row : m.entries) {
      ojson r = ojson::array();
      for (const auto& v : row) r.push_back(rwall::to_string(v));
      matrix.push_back(r);
    }
    os << ojson{{"config", config}, {"index", index}, {"matrix", matrix}}.dump(2) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ kernel

struct KernelArgs {
  Common common;
  int level = 1;
  int steps = 0;
  int cap = 5;
  int nx = 512;
  int nu = 512;
  double contour_radius = 1.5;
  std::string precision = "double";
  std::vector<int> sites;
};

int run_kernel(const KernelArgs& a) {
  const rwall::ModelParams params = model_params(a.common);
  const std::string format = a.common.format.empty() ? "csv" : a.common.format;
  if (format == "jsonl") throw UsageError("kernel supports --format csv or json");
  if (a.level < 1 || a.steps < 0 || a.cap < 0) throw UsageError("--level >= 1, --steps >= 0 and --cap >= 0 required");
  rwall::QuadratureSpec quad;
  quad.n_x = a.nx;
  quad.n_u = a.nu;
  quad.contour_radius = a.contour_radius;
  quad.precision = rwall::parse_precision(a.precision);
  const double alpha = params.alpha_double();
  const double radius = rwall::effective_radius(quad, alpha);
  ojson config{{"q", rwall::to_string(params.q)}, {"alpha", rwall::to_string(params.alpha)}, {"level", a.level},
               {"steps", a.steps}, {"level_convention", rwall::to_string(rwall::LevelConvention::t_matrix)}};
  ojson diagnostics{{"n_x", quad.n_x}, {"n_u", quad.n_u}, {"requested_radius", quad.contour_radius},
                    {"contour_radius", radius}, {"precision", rwall::to_string(quad.precision)}};
  Output out(a.common.out);
  std::ostream& os = out.stream();

  if (!a.sites.empty()) {
    std::vector<rwall::KernelPoint> pts;
    ojson sites = ojson::array();
    for (int s : a.sites) {
      if (s < 0) throw UsageError("--sites must be nonnegative");
      pts.push_back(rwall::kernel_point(a.level, s));
      sites.push_back(s);
    }
    const double rho = rwall::correlation(pts, a.steps, alpha, quad, a.common.threads);
    config["sites"] = sites;
    if (format == "csv") {
      os << "sites,correlation\n" << quoted(sites.dump()) << "," << rho << "\n";
    } else {
      os << ojson{{"config", config}, {"diagnostics", diagnostics}, {"correlation", rho}}.dump(2) << "\n";
    }
    return 0;
  }

  double max_residue = 0.0;
  long warnings = 0;
  ojson rows = ojson::array();
  if (format == "csv") os << "s1,s2,value\n";
  for (int s1 = 0; s1 <= a.cap; ++s1) {
    for (int s2 = 0; s2 <= a.cap; ++s2) {
      const auto v = rwall::kernel_K(rwall::kernel_point(a.level, s1), rwall::kernel_point(a.level, s2), a.steps,
                                     alpha, quad);
      max_residue = std::max(max_residue, v.imag_residue);
      if (v.accuracy_warning) ++warnings;
      if (format == "csv") {
        os << s1 << "," << s2 << "," << v.value << "\n";
      } else {
        rows.push_back({{"s1", s1}, {"s2", s2}, {"value", v.value}, {"imag_residue", v.imag_residue}});
      }
    }
  }
  diagnostics["max_imag_residue"] = max_residue;
  diagnostics["accuracy_warnings"] = warnings;
  if (warnings > 0) {
    std::cerr << "warning: " << warnings << " kernel entries have imaginary residue above "
              << rwall::kImagResidueThreshold << " (max " << max_residue
              << "); raise --nx/--nu or use --precision extended\n";
  }
  if (format == "json") os << ojson{{"config", config}, {"diagnostics", diagnostics}, {"rows", rows}}.dump(2) << "\n";
  return 0;
}

// -------------------------------------------------------------- asymptotic

struct AsymptoticArgs {
  Common common;
  double alpha = 1.0;
  double t = 1.0;
  double ell = 0.5;
  int s1 = 0;
  int s2 = 0;
  int dr1 = 0;
  int dr2 = 0;
  std::string a = "minus";
  std::vector<int> Ns;
  double sigma1 = 0, eta1 = 0, sigma2 = 0, eta2 = 0;
  int panels = 1;
};

rwall::HalfIndex parse_half(const std::string& s) {
  if (s == "minus") return rwall::HalfIndex::minus;
  if (s == "plus") return rwall::HalfIndex::plus;
  throw UsageError("--a must be plus or minus");
}

void emit_rows(std::ostream& os, const std::string& format, const ojson& config,
               const std::vector<rwall::ConvergenceRow>& rows) {
  if (format == "csv") {
    os << "N,scaled_K,limit_value,abs_diff\n";
    for (const auto& r : rows) os << r.N << "," << r.scaled_K << "," << r.limit_value << "," << r.abs_diff << "\n";
    return;
  }
  ojson arr = ojson::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].abs_diff < rows[i - 1].abs_diff)) monotone = false;
    arr.push_back({{"N", rows[i].N}, {"scaled_K", rows[i].scaled_K}, {"limit_value", rows[i].limit_value},
                   {"abs_diff", rows[i].abs_diff}});
  }
  os << ojson{{"config", config}, {"rows", arr}, {"monotone_decreasing", monotone}}.dump(2) << "\n";
}

int run_asymptotic(const std::string& mode, const AsymptoticArgs& a) {
  const std::string format = a.common.format.empty() ? (mode == "jacobi" || mode == "trend" ? "csv" : "json")
                                                     : a.common.format;
  if (format == "jsonl") throw UsageError("asymptotic supports --format csv or json");
  if (!(a.alpha > 0.0)) throw UsageError("--alpha must be > 0");
  Output out(a.common.out);
  std::ostream& os = out.stream();
  const rwall::MacroParams m{a.t, a.ell, a.alpha};
  if (mode == "theta") {
    const double th = rwall::theta(m);
    const double crit = rwall::critical_curve(a.t, a.alpha);
    const std::string regime = th < -1.0 ? "frozen" : (th < 1.0 ? "liquid" : "outside");
    if (format == "csv") {
      os << "t,ell,alpha,theta,critical_ell,regime\n"
         << a.t << "," << a.ell << "," << a.alpha << "," << th << "," << crit << "," << regime << "\n";
    } else {
      os << ojson{{"t", a.t}, {"ell", a.ell}, {"alpha", a.alpha}, {"theta", th}, {"critical_ell", crit},
                  {"regime", regime}}
                .dump(2)
         << "\n";
    }
    return 0;
  }
  if (mode == "jacobi") {
    const std::vector<int> Ns = a.Ns.empty() ? std::vector<int>{50, 100, 200, 400} : a.Ns;
    const rwall::PointOffset p1{a.dr1, parse_half(a.a), a.s1}, p2{a.dr2, parse_half(a.a), a.s2};
    const auto rows = rwall::jacobi_convergence(m, p1, p2, Ns);
    emit_rows(os, format,
              {{"t", a.t}, {"ell", a.ell}, {"alpha", a.alpha}, {"theta", rwall::theta(m)}, {"a", a.a},
               {"s1", a.s1}, {"s2", a.s2}, {"dr1", a.dr1}, {"dr2", a.dr2}},
              rows);
    return 0;
  }
  if (mode == "trend") {
    const std::vector<int> Ns = a.Ns.empty() ? std::vector<int>{100, 200, 400, 800} : a.Ns;
    const auto rows = rwall::pearcey_convergence(a.alpha, parse_half(a.a), Ns);
    emit_rows(os, format, {{"alpha", a.alpha}, {"a", a.a}, {"sigma", 0}, {"eta", 0}}, rows);
    return 0;
  }
  // pearcey
  const rwall::PearceyParams p{a.sigma1, a.eta1, a.sigma2, a.eta2};
  rwall::PearceyQuadrature quad;
  quad.panels_per_unit = a.panels;
  const double v = rwall::symmetric_pearcey(p, quad);
  if (format == "csv") {
    os << "sigma1,eta1,sigma2,eta2,value\n"
       << a.sigma1 << "," << a.eta1 << "," << a.sigma2 << "," << a.eta2 << "," << v << "\n";
  } else {
    os << ojson{{"sigma1", a.sigma1}, {"eta1", a.eta1}, {"sigma2", a.sigma2}, {"eta2", a.eta2},
                {"panels_per_unit", a.panels}, {"gaussian_term", rwall::pearcey_gaussian_term(p)}, {"value", v}}
              .dump(2)
       << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  Common common;
  std::vector<std::string> suites;
  std::vector<std::string> qs;
  int max_level = 5;
  int max_part = 4;
  double scale = 1.0;
};

int run_verify(const VerifyArgs& a) {
  if (!a.common.alpha.empty()) throw UsageError("verify takes --q, not --alpha");
  rwall::VerifyOptions options;
  options.seed = a.common.seed;
  options.threads = a.common.threads;
  options.max_level = a.max_level;
  options.max_part = a.max_part;
  options.trajectory_scale = a.scale;
  for (const auto& q : a.qs) options.qs.push_back(rwall::ModelParams::from_q(rwall::parse_rational(q)).q);
  if (!a.common.q.empty()) options.qs.push_back(rwall::ModelParams::from_q(rwall::parse_rational(a.common.q)).q);
  std::vector<std::string> names = a.suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    names.clear();
    for (const auto& s : rwall::suite_catalog()) names.push_back(s.name);
  }
  for (const auto& n : names) {
    try {
      rwall::suite_info(n);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<rwall::SuiteResult> results;
  for (const auto& n : names) {
    auto r = rwall::run_suite(n, options);
    std::cerr << (r.verdict == rwall::Verdict::pass ? "PASS" : "FAIL") << " " << n
              << (r.info.blocking ? "" : " (non-blocking)") << ": " << r.summary << "\n";
    results.push_back(std::move(r));
  }
  bool failed = false;
  const ojson report = rwall::consolidated_report(results, options, failed);
  Output out(a.common.out);
  out.stream() << report.dump(2) << "\n";
  return failed ? 1 : 0;
}

// ---------------------------------------------------------- export-surface

struct SurfaceArgs {
  Common common;
  int levels = 4;
  int steps = 10;
  int cap = 20;
};

int run_surface(const SurfaceArgs& a) {
  const rwall::ModelParams params = model_params(a.common);
  const std::string format = a.common.format.empty() ? "csv" : a.common.format;
  if (format == "jsonl") throw UsageError("export-surface supports --format csv or json");
  rwall::RandomStream rng(a.common.seed, 0);
  const auto traj = rwall::simulate(params, a.levels, a.steps, rng);
  Output out(a.common.out);
  std::ostream& os = out.stream();
  ojson grids = ojson::array();
  if (format == "csv") os << "time,level,site,height\n";
  for (const auto& state : traj) {
    ojson grid = ojson::array();
    for (int k = 1; k <= a.levels; ++k) {
      ojson row = ojson::array();
      for (int x = 0; x <= a.cap; ++x) {
        const int h = rwall::height_function(state, k, x);
        if (format == "csv") {
          os << state.time() << "," << k << "," << x << "," << h << "\n";
        } else {
          row.push_back(h);
        }
      }
      grid.push_back(row);
    }
    if (format == "json") grids.push_back({{"time", state.time()}, {"heights", grid}});
  }
  if (format == "json") {
    os << ojson{{"config",
                 {{"q", rwall::to_string(params.q)}, {"levels", a.levels}, {"steps", a.steps}, {"cap", a.cap},
                  {"seed", a.common.seed}}},
                {"surfaces", grids}}
              .dump(2)
       << "\n";
  }
  return 0;
}

void add_io_flags(CLI::App* app, Common& c, bool with_seed, bool with_threads) {
  if (with_seed) app->add_option("--seed", c.seed, "master seed");
  if (with_threads) app->add_option("--threads", c.threads, "worker cap, 0 = hardware concurrency");
  app->add_option("--out", c.out, "output file, stdout when omitted");
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json", "jsonl"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflecting-wall interlacing particle system: simulation, exact kernels and checks"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "export trajectories from the densely packed state");
  add_model_flags(simulate, sim.common);
  add_io_flags(simulate, sim.common, true, false);
  simulate->add_option("--levels", sim.levels, "number of levels")->check(CLI::PositiveNumber);
  simulate->add_option("--steps", sim.steps, "number of full steps")->check(CLI::NonNegativeNumber);
  simulate->add_option("--trajectories", sim.trajectories, "independent trajectories")->check(CLI::PositiveNumber);
  simulate->add_option("--bottom-rule", sim.rule, "table (default) or printed")
      ->check(CLI::IsMember({"table", "printed"}));

  TransitionArgs tr;
  auto* transition = app.add_subcommand("transition", "exact transition matrices P_k, T_k or multi-level T");
  add_model_flags(transition, tr.common);
  add_io_flags(transition, tr.common, false, false);
  transition->add_option("--level", tr.level, "level k for P and T");
  transition->add_option("--levels", tr.levels, "number of levels for --kind multilevel");
  transition->add_option("--cap", tr.cap, "largest part of the enumerated partitions")->check(CLI::NonNegativeNumber);
  transition->add_option("--kind", tr.kind, "P, T (default) or multilevel")
      ->check(CLI::IsMember({"P", "T", "multilevel"}));

  KernelArgs ke;
  auto* kernel = app.add_subcommand("kernel", "correlation kernel tables and correlation functions");
  add_model_flags(kernel, ke.common);
  add_io_flags(kernel, ke.common, false, true);
  kernel->add_option("--level", ke.level, "level k");
  kernel->add_option("--steps", ke.steps, "time n");
  kernel->add_option("--cap", ke.cap, "largest site s in the table");
  kernel->add_option("--nx", ke.nx, "x-quadrature nodes")->check(CLI::PositiveNumber);
  kernel->add_option("--nu", ke.nu, "contour nodes")->check(CLI::PositiveNumber);
  kernel->add_option("--contour-radius", ke.contour_radius, "contour radius (auto-shrunk near the pole)");
  kernel->add_option("--precision", ke.precision, "double or extended")
      ->check(CLI::IsMember({"double", "extended"}));
  kernel->add_option("--sites", ke.sites, "sites for the correlation det[K]")->delimiter(',');

  AsymptoticArgs as;
  auto* asym = app.add_subcommand("asymptotic", "limit kernels and finite-N convergence tables");
  asym->require_subcommand(1);
  std::string asym_mode;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"theta", "saddle location and regime"},
           {"jacobi", "finite-N kernel vs the discrete Jacobi kernel"},
           {"pearcey", "symmetric Pearcey kernel value"},
           {"trend", "finite-N kernel at the critical point vs the Pearcey kernel"}}) {
    auto* sub = asym->add_subcommand(name, help);
    sub->add_option("--alpha", as.alpha, "alpha > 0");
    add_io_flags(sub, as.common, false, false);
    sub->final_callback([&asym_mode, n = name] { asym_mode = n; });
    if (name == "theta" || name == "jacobi") {
      sub->add_option("--t", as.t, "macroscopic time");
      sub->add_option("--ell", as.ell, "macroscopic level");
    }
    if (name == "jacobi" || name == "trend") {
      sub->add_option("--a", as.a, "half index plus or minus");
      sub->add_option("--Ns", as.Ns, "N values")->delimiter(',');
    }
    if (name == "jacobi") {
      sub->add_option("--s1", as.s1);
      sub->add_option("--s2", as.s2);
      sub->add_option("--dr1", as.dr1, "level offset of the first point");
      sub->add_option("--dr2", as.dr2, "level offset of the second point");
    }
    if (name == "pearcey") {
      sub->add_option("--sigma1", as.sigma1);
      sub->add_option("--eta1", as.eta1);
      sub->add_option("--sigma2", as.sigma2);
      sub->add_option("--eta2", as.eta2);
      sub->add_option("--panels", as.panels, "panels per unit length")->check(CLI::PositiveNumber);
    }
  }

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON report");
  add_model_flags(verify, ve.common);
  add_io_flags(verify, ve.common, true, true);
  verify->add_option("--suite", ve.suites, "suite name, repeatable; all when omitted");
  verify->add_option("--max-level", ve.max_level, "largest level for the exact suites")->check(CLI::PositiveNumber);
  verify->add_option("--max-part", ve.max_part, "largest part for the exact suites")->check(CLI::NonNegativeNumber);
  verify->add_option("--scale", ve.scale, "multiplier on Monte Carlo trajectory counts")->check(CLI::PositiveNumber);

  SurfaceArgs su;
  auto* surface = app.add_subcommand("export-surface", "height-function grid along one trajectory");
  add_model_flags(surface, su.common);
  add_io_flags(surface, su.common, true, false);
  surface->add_option("--levels", su.levels)->check(CLI::PositiveNumber);
  surface->add_option("--steps", su.steps)->check(CLI::NonNegativeNumber);
  surface->add_option("--cap", su.cap, "largest site")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*transition) return run_transition(tr);
    if (*kernel) return run_kernel(ke);
    if (*asym) return run_asymptotic(asym_mode, as);
    if (*verify) return run_verify(ve);
    if (*surface) return run_surface(su);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
