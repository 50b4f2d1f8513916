#include "mmm/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "mmm/diagnostics/diagnostics.hpp"
#include "mmm/diagnostics/report_json.hpp"
#include "mmm/error.hpp"
#include "mmm/models/ou.hpp"
#include "mmm/models/registry.hpp"
#include "mmm/prob/io.hpp"

namespace mmm::cli {
namespace {

using nlohmann::ordered_json;

// Stream ids, one per purpose, so subcommands never share randomness.
constexpr std::uint64_t kSimulateStream = 1;
constexpr std::uint64_t kConvergeStream = 2;
constexpr std::uint64_t kLongRunStream = 3;
constexpr std::uint64_t kTailStream = 4;
constexpr std::uint64_t kCheckStream = 5;
constexpr std::uint64_t kFigureStream = 6;
constexpr std::uint64_t kStartStream = 7;

constexpr std::size_t kLongRunBurnIn = 10000;

struct Common {
  std::string model;
  std::string config;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Common& c) {
  auto* m = sub->add_option("--model", c.model, "Model preset");
  auto* f = sub->add_option("--config", c.config, "Model config file");
  m->excludes(f);
  sub->add_option("--seed", c.seed, "Master seed (required)")->required();
}

Model load_model(const Common& c) {
  if (!c.config.empty()) return build_model(parse_config_file(c.config));
  if (c.model.empty()) throw ConfigError("one of --model or --config is required");
  return build_model(preset(c.model));
}

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) : os_(path) {
    if (!os_) throw ConfigError("cannot open output file: " + path);
  }
  std::ostream& stream() { return os_; }

 private:
  std::ofstream os_;
};

std::string jumps_path(const std::string& out) {
  const std::string ext = ".csv";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + ".jumps.csv";
  }
  return out + ".jumps.csv";
}

std::vector<double> time_grid(double horizon, std::size_t steps) {
  if (horizon == 0.0) return {0.0};
  std::vector<double> g(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    g[i] = i == steps ? horizon : horizon * static_cast<double>(i) / static_cast<double>(steps);
  }
  return g;
}

double parse_start(const Model& m, const std::string& from) {
  if (from == "low") return m.start_low;
  if (from == "high") return m.start_high;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(from, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != from.size() || !std::isfinite(v)) {
    throw ConfigError("--from must be low, high, stationary or a number");
  }
  return v;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  Common common;
  double horizon = 1000.0;
  std::size_t steps = 1000;
  std::string from = "low";
  std::string out;
};

int cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  if (!(o.horizon >= 0.0) || !std::isfinite(o.horizon)) {
    throw ConfigError("--horizon must be finite and >= 0");
  }
  if (o.steps == 0) throw ConfigError("--steps must be positive");
  const Model m = load_model(o.common);
  const double x0 = parse_start(m, o.from);
  const Noise noise(o.common.seed, kSimulateStream);
  ordered_json summary;
  summary["model"] = m.name;
  summary["seed"] = o.common.seed;
  summary["horizon"] = o.horizon;

  std::ostringstream dense;
  std::optional<std::string> skeleton;
  if (m.pdmp) {
    const PdmpPath path = simulate_path(*m.pdmp, x0, o.horizon, noise);
    const auto grid = time_grid(o.horizon, o.steps);
    write_dense_csv(dense, path, grid);
    std::ostringstream sk;
    write_skeleton_csv(sk, path);
    skeleton = sk.str();
    summary["jumps"] = path.jump_count();
    summary["final_state"] = path.final_state();
  } else if (m.continuous_time) {
    const auto grid = time_grid(o.horizon, o.steps);
    dense << "t,X_t\n";
    double x = x0;
    Noise local = noise;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i > 0) x = m.transition(grid[i] - grid[i - 1])(x, local);
      if (!std::isfinite(x)) throw SimulationError("non-finite state", i);
      dense << format_double(grid[i]) << ',' << format_double(x) << '\n';
    }
    summary["final_state"] = x;
  } else {
    const auto n = static_cast<std::size_t>(std::llround(o.horizon));
    Noise local = noise;
    const auto path = iterate(m.event_kernel, x0, n, local);
    write_path_csv(dense, path);
    summary["steps"] = n;
    summary["final_state"] = path.back();
  }

  if (o.out.empty()) {
    out << dense.str();
    return kOk;
  }
  OutputFile(o.out).stream() << dense.str();
  summary["path_csv"] = o.out;
  if (skeleton) {
    const std::string jp = jumps_path(o.out);
    OutputFile(jp).stream() << *skeleton;
    summary["jumps_csv"] = jp;
  }
  out << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- converge

struct ConvergeOpts {
  Common common;
  std::string from;
  std::string target;
  std::vector<double> checkpoints;
  std::size_t n_paths = 10000;
  std::size_t n_events = 1000000;
  std::string out;
};

std::vector<double> default_checkpoints(const Model& m) {
  if (m.name == "ou") return {0.1, 0.5, 1.0, 2.0, 4.0};
  return {0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
}

int cmd_converge(const ConvergeOpts& o, std::ostream& out) {
  const Model m = load_model(o.common);
  const std::vector<double> checkpoints =
      o.checkpoints.empty() ? default_checkpoints(m) : o.checkpoints;
  const std::string from = o.from.empty() ? (m.name == "ou" ? "high" : "low") : o.from;

  std::optional<EmpiricalDistribution> long_run;
  auto surrogate = [&]() -> const EmpiricalDistribution& {
    if (!long_run) {
      const auto s = long_run_samples(m, o.n_events, kLongRunBurnIn,
                                      Noise(o.common.seed, kLongRunStream));
      long_run = EmpiricalDistribution::from_samples(s);
    }
    return *long_run;
  };

  std::string target_kind = o.target;
  if (target_kind.empty()) target_kind = m.stationary ? "analytic" : "long-run";
  if (target_kind != "analytic" && target_kind != "long-run") {
    throw ConfigError("--target must be analytic or long-run");
  }
  if (target_kind == "analytic" && !m.stationary) {
    throw ConfigError("model '" + m.name + "' has no closed-form stationary law");
  }
  const Target target = target_kind == "analytic" ? Target(*m.stationary) : Target(surrogate());

  std::optional<double> x0;
  EmpiricalDistribution phi0 = EmpiricalDistribution::point_mass(0.0);
  if (from == "stationary") {
    // An independent long run serves as the stationary start.
    const auto s = long_run_samples(m, o.n_paths, kLongRunBurnIn,
                                    Noise(o.common.seed, kStartStream),
                                    10.0 * m.long_run_spacing);
    phi0 = EmpiricalDistribution::from_samples(s);
  } else {
    x0 = parse_start(m, from);
    phi0 = EmpiricalDistribution::point_mass(*x0);
  }

  ConvergenceReport r = convergence_curve(m.transition, phi0, checkpoints, target, o.n_paths,
                                          Noise(o.common.seed, kConvergeStream));
  ordered_json summary;
  summary["model"] = m.name;
  summary["seed"] = o.common.seed;
  summary["from"] = from;
  summary["target"] = target_kind;
  if (m.mmc) {
    const MmcConstants c = *m.mmc;
    attach_bound(r, [c](double t) { return c.c * std::exp(-c.alpha * t); });
    bool holds = true;
    for (const auto& cp : r.checkpoints) holds = holds && cp.beta_hat <= *cp.bound;
    summary["theory"] = {{"kappa", c.kappa}, {"C", c.c}, {"alpha", c.alpha}};
    summary["bound_satisfied"] = holds;
  }
  summary["report"] = to_json(r);
  if (m.name == "ou" && x0) {
    const OuConfig cfg{m.description.get("theta"), m.description.get("sigma")};
    ordered_json ref = ordered_json::array();
    for (double t : checkpoints) {
      ref.push_back({{"t", t},
                     {"analytic_beta",
                      bhattacharya_1d(ou_exact_cdf(cfg, *x0, t), ou_stationary_cdf(cfg))}});
    }
    summary["analytic"] = ref;
  }

  if (o.out.empty()) {
    write_convergence_csv(out, r);
    return kOk;
  }
  write_convergence_csv(OutputFile(o.out).stream(), r);
  summary["csv"] = o.out;
  out << summary.dump(2) << '\n';
  return kOk;
}

// -------------------------------------------------------------------- tail

struct TailOpts {
  Common common;
  std::size_t n_events = 1000000;
  std::size_t burn_in = kLongRunBurnIn;
  std::size_t k = 0;
};

int cmd_tail(const TailOpts& o, std::ostream& out) {
  const Model m = load_model(o.common);
  std::vector<double> s =
      long_run_samples(m, o.n_events, o.burn_in, Noise(o.common.seed, kTailStream));
  for (double& x : s) x = m.tail_transform(x);
  const TailEstimate t = hill_tail_exponent(s, o.k, o.common.seed);
  ordered_json summary;
  summary["model"] = m.name;
  summary["seed"] = o.common.seed;
  summary["n_events"] = o.n_events;
  summary["estimate"] = to_json(t);
  if (m.tail_exponent) {
    summary["alpha_theory"] = *m.tail_exponent;
    summary["relative_error"] = std::abs(t.alpha - *m.tail_exponent) / *m.tail_exponent;
  } else {
    summary["alpha_theory"] = nullptr;
  }
  out << summary.dump(2) << '\n';
  return kOk;
}

// ------------------------------------------------------------------- check

struct CheckOpts {
  Common common;
  std::size_t trials = 1000;
  std::size_t n_reps = 10000;
};

// Intervals at the last three times stay inside the hull of the earlier
// ones, widened by 10% of its width.
bool stabilizes(const std::vector<std::vector<TightnessInterval>>& profile) {
  const std::size_t n = profile.size();
  if (n < 4) return true;
  double lo = profile[0][0].lo;
  double hi = profile[0][0].hi;
  for (std::size_t i = 0; i + 3 < n; ++i) {
    lo = std::min(lo, profile[i][0].lo);
    hi = std::max(hi, profile[i][0].hi);
  }
  const double pad = 0.1 * (hi - lo);
  for (std::size_t i = n - 3; i < n; ++i) {
    if (profile[i][0].lo < lo - pad || profile[i][0].hi > hi + pad) return false;
  }
  return true;
}

int cmd_check(const CheckOpts& o, std::ostream& out) {
  const Model m = load_model(o.common);
  const Noise base(o.common.seed, kCheckStream);
  bool monotone_ok = true;
  bool all_ok = true;
  char line[256];

  const MonotoneCouplingResult mc =
      monotone_coupling_test(m.event_kernel, m.start_low, m.start_high, o.trials, 200,
                             base.split(0));
  monotone_ok = mc.holds();
  std::snprintf(line, sizeof line,
                "%s monotone-coupling: %zu shared-noise pairs x 200 steps, %zu violations "
                "(exact, declared %s)",
                mc.holds() ? "PASS" : "FAIL", mc.trials, mc.violations,
                m.event_kernel.monotone_by_construction ? "monotone" : "not monotone");
  out << line << '\n';

  if (m.compact && m.wage) {
    const auto& cfg = *m.wage;
    const double w_hat = cfg.mmc->w_hat;
    const MmcEstimate e = mmc_monte_carlo(m.transition(1.0), m.compact->first,
                                          m.compact->second, w_hat, 1, 10000, base.split(1));
    const int n = cfg.mmc->n;
    const double eps = *cfg.mmc->epsilon;
    const double poisson = std::exp(-(cfg.delta + cfg.lambda) - std::lgamma(n + 1.0));
    const double bound_down = poisson * std::pow(cfg.delta, n) * eps;
    const double bound_up = poisson * std::pow(cfg.lambda, n) * eps;
    const bool ok = e.certified();
    all_ok = all_ok && ok;
    std::snprintf(line, sizeof line,
                  "%s mixing-condition: P(up)=%.4f (bound %.4f) P(down)=%.4f (bound %.4f), "
                  "lower bound %.4f at 98%% confidence",
                  ok ? "PASS" : "FAIL", e.p_up, bound_up, e.p_down, bound_down, e.epsilon_low);
    out << line << '\n';
  }

  if (m.reversal_rate && m.pdmp) {
    const std::size_t horizon = 20;
    const MixingReport r =
        order_reversal_survival(m.event_kernel, m.start_high, m.start_low, m.reversal_mode,
                                horizon, o.n_reps, base.split(2), *m.reversal_rate);
    bool ok = true;
    double worst = -1.0;
    for (std::size_t k = 1; k <= horizon; ++k) {
      const double excess = r.survival[k] - (r.bound[k] + 3.0 * r.std_error[k]);
      worst = std::max(worst, excess);
      ok = ok && excess <= 0.0;
    }
    all_ok = all_ok && ok;
    std::snprintf(line, sizeof line,
                  "%s order-reversal: survival vs (1-%.4f)^n + 3 se over n=1..20, %zu "
                  "replications, worst excess %.4f",
                  ok ? "PASS" : "FAIL", *m.reversal_rate, r.replications, worst);
    out << line << '\n';
  }

  {
    std::vector<double> times;
    const double unit = m.continuous_time ? 50.0 * m.long_run_spacing : 50.0;
    for (int i = 1; i <= 8; ++i) times.push_back(unit * i);
    const double levels[] = {0.01};
    const auto profile =
        trajectory_tightness(m.transition, m.start_high, times, 2000, levels, base.split(3));
    const bool ok = stabilizes(profile);
    all_ok = all_ok && ok;
    std::snprintf(line, sizeof line,
                  "%s tightness: eps=0.01 interval at t=%g is [%.4f, %.4f], at t=%g is "
                  "[%.4f, %.4f]",
                  ok ? "PASS" : "FAIL", times.front(), profile.front()[0].lo,
                  profile.front()[0].hi, times.back(), profile.back()[0].lo,
                  profile.back()[0].hi);
    out << line << '\n';
  }

  if (!monotone_ok) return kMonotoneFailure;
  return all_ok ? kOk : kCheckFailure;
}

// ------------------------------------------------------------------ figure

struct FigureOpts {
  std::string id;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  double horizon = 200000.0;
};

void write_histogram(std::ostream& os, const std::vector<double>& s, std::size_t bins) {
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double x : s) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    counts[std::min(b, bins - 1)]++;
  }
  os << "bin_lo,bin_hi,count,density\n";
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + width * static_cast<double>(b);
    os << format_double(a) << ',' << format_double(a + width) << ',' << counts[b] << ','
       << format_double(static_cast<double>(counts[b]) / (static_cast<double>(s.size()) * width))
       << '\n';
  }
}

int cmd_figure(const FigureOpts& o, std::ostream& out) {
  static const std::vector<std::string> ids = {"wage", "belief", "income-jump", "income-drift"};
  if (std::find(ids.begin(), ids.end(), o.id) == ids.end()) {
    throw ConfigError("unknown figure id: " + o.id);
  }
  if (!(o.horizon > 0.0) || !std::isfinite(o.horizon)) throw ConfigError("--horizon must be > 0");
  const Model m = build_model(preset(o.id));
  namespace fs = std::filesystem;
  fs::create_directories(o.out_dir);
  const Noise noise(o.seed, kFigureStream);
  const std::string stem = (fs::path(o.out_dir) / o.id).string();

  ordered_json summary;
  summary["id"] = o.id;
  summary["seed"] = o.seed;
  // Stationary samples: every unit of time (or period) after a burn-in of
  // 1% of the run.
  std::vector<double> stationary;
  if (m.pdmp) {
    const PdmpPath path = simulate_path(*m.pdmp, m.start_low, o.horizon, noise);
    write_skeleton_csv(OutputFile(stem + "_jumps.csv").stream(), path);
    const auto grid = time_grid(o.horizon, 10000);
    write_dense_csv(OutputFile(stem + "_path.csv").stream(), path, grid);
    summary["horizon"] = o.horizon;
    summary["jumps"] = path.jump_count();
    if (o.id == "wage") {
      const auto& kinds = path.shock_kinds();
      summary["destructions"] = std::count(kinds.begin(), kinds.end(), kWageDestruction);
      summary["offers"] = std::count(kinds.begin(), kinds.end(), kWageOffer);
      const auto [lo, hi] = std::minmax_element(path.states().begin(), path.states().end());
      summary["min_state"] = *lo;
      summary["max_state"] = *hi;
    }
    for (double t = std::ceil(0.01 * o.horizon); t <= o.horizon; t += 1.0) {
      stationary.push_back(path.state_at(t));
    }
  } else {
    const auto n = static_cast<std::size_t>(std::llround(o.horizon));
    Noise local = noise;
    const auto path = iterate(m.event_kernel, m.start_low, n, local);
    write_path_csv(OutputFile(stem + "_path.csv").stream(), path);
    summary["steps"] = n;
    stationary.assign(path.begin() + static_cast<std::ptrdiff_t>(n / 100), path.end());
  }
  write_histogram(OutputFile(stem + "_hist.csv").stream(), stationary, 100);

  // Thinned stationary sample for distribution comparisons: 10^4 points.
  const std::size_t stride = std::max<std::size_t>(1, stationary.size() / 10000);
  std::vector<double> thin;
  for (std::size_t i = 0; i < stationary.size() && thin.size() < 10000; i += stride) {
    thin.push_back(stationary[i]);
  }
  write_distribution_csv(OutputFile(stem + "_stationary.csv").stream(),
                         EmpiricalDistribution::from_samples(thin));
  summary["stationary_samples"] = stationary.size();

  if (o.id == "income-jump" || o.id == "income-drift") {
    std::vector<double> y(stationary.size());
    std::transform(stationary.begin(), stationary.end(), y.begin(),
                   [](double x) { return std::exp(x); });
    try {
      const TailEstimate t = hill_tail_exponent(y, 0, o.seed);
      summary["tail"] = to_json(t);
    } catch (const InsufficientData&) {
      summary["tail"] = nullptr;
    }
    if (m.tail_exponent) summary["alpha_theory"] = *m.tail_exponent;
  }
  summary["files"] = {stem + "_path.csv", stem + "_hist.csv", stem + "_stationary.csv"};
  if (m.pdmp) summary["files"].push_back(stem + "_jumps.csv");
  out << summary.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and stability diagnostics for monotone Markov models", "mmm"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* s = app.add_subcommand("simulate", "Simulate one path");
  add_common(s, sim.common);
  s->add_option("--horizon", sim.horizon, "Time horizon (periods for discrete models)");
  s->add_option("--steps", sim.steps, "Grid intervals of the dense output");
  s->add_option("--from", sim.from, "Start: low, high or a number");
  s->add_option("--out", sim.out, "Dense path CSV; jumps go to <stem>.jumps.csv");

  ConvergeOpts conv;
  auto* c = app.add_subcommand("converge", "Distance to the stationary law over time");
  add_common(c, conv.common);
  c->add_option("--from", conv.from, "Start: low, high, stationary or a number");
  c->add_option("--target", conv.target, "analytic or long-run");
  c->add_option("--checkpoints", conv.checkpoints, "Comma-separated times")->delimiter(',');
  c->add_option("--n-paths", conv.n_paths, "Replications per checkpoint");
  c->add_option("--n-events", conv.n_events, "Length of the long-run surrogate");
  c->add_option("--out", conv.out, "Report CSV");

  TailOpts tail;
  auto* t = app.add_subcommand("tail", "Hill estimate of the stationary tail index");
  add_common(t, tail.common);
  t->add_option("--n-events", tail.n_events, "Recorded states of the long run");
  t->add_option("--burn-in", tail.burn_in, "Discarded states");
  t->add_option("--k", tail.k, "Order statistics (default n^(2/3), at most n/10)");

  CheckOpts chk;
  auto* k = app.add_subcommand("check", "Monotonicity, mixing, reversal and tightness checks");
  add_common(k, chk.common);
  k->add_option("--n-paths", chk.trials, "Coupled pairs in the monotonicity test");

  FigureOpts fig;
  auto* f = app.add_subcommand("figure", "Sample path and stationary histogram data");
  f->add_option("--id", fig.id, "wage, belief, income-jump or income-drift")->required();
  f->add_option("--seed", fig.seed, "Master seed (required)")->required();
  f->add_option("--out-dir", fig.out_dir, "Output directory");
  f->add_option("--horizon", fig.horizon, "Run length");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }

  try {
    if (s->parsed()) return cmd_simulate(sim, out);
    if (c->parsed()) return cmd_converge(conv, out);
    if (t->parsed()) return cmd_tail(tail, out);
    if (k->parsed()) return cmd_check(chk, out);
    if (f->parsed()) return cmd_figure(fig, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InsufficientData& e) {
    err << "insufficient data: " << e.what() << '\n';
    return kInsufficientData;
  } catch (const Error& e) {
    err << "simulation error: " << e.what() << '\n';
    return kSimulationError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return kBadConfig;
  }
  return kBadConfig;
}

}  // namespace mmm::cli
