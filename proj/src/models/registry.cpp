#include "mmm/models/registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mmm/error.hpp"
#include "mmm/models/belief.hpp"
#include "mmm/models/income.hpp"
#include "mmm/models/ou.hpp"

namespace mmm {

double ModelDescription::get(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw ConfigError("model '" + kind + "' has no parameter '" + key + "'");
}

void ModelDescription::set(const std::string& key, double value) {
  for (auto& [k, v] : params) {
    if (k == key) {
      v = value;
      return;
    }
  }
  throw ConfigError("model '" + kind + "' has no parameter '" + key + "'");
}

namespace {

const std::map<std::string, ModelDescription>& kind_defaults() {
  static const std::map<std::string, ModelDescription> table = {
      {"wage",
       {"wage",
        {{"delta", 0.1},
         {"lambda", 0.5},
         {"w_bar", 1.0},
         {"destruction_a", 2.0},
         {"destruction_b", 8.0},
         {"offer_floor", 0.5},
         {"offer_a", 8.0},
         {"offer_b", 2.0},
         {"w_hat", 0.5},
         {"mmc_n", 1.0}}}},
      {"belief",
       {"belief",
        {{"mu_h", 0.3},
         {"mu_l", 0.0},
         {"sigma", 1.0},
         {"rho", 0.04},
         {"reset_mean", 0.0},
         {"reset_sd", 0.5}}}},
      {"income-jump",
       {"income-jump",
        {{"lambda1", 1.0}, {"lambda2", 0.1}, {"raise_rate", 20.0}, {"reset_sd", 0.3}, {"h", 0.0}}}},
      {"income-drift",
       {"income-drift", {{"mu", 0.05}, {"lambda", 0.15}, {"reset_sd", 0.3}, {"h", 0.0}}}},
      {"ou", {"ou", {{"theta", 1.0}, {"sigma", 1.0}}}},
      {"nonmonotone", {"nonmonotone", {{"a", 0.5}, {"sd", 1.0}}}},
      {"pareto", {"pareto", {{"alpha", 2.0}, {"scale", 1.0}}}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& model_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : kind_defaults()) out.push_back(k);
    return out;
  }();
  return kinds;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"wage",        "belief",       "income-jump",
                                                 "income-drift", "income-pareto", "drift-reset",
                                                 "ou",          "nonmonotone",  "pareto"};
  return names;
}

ModelDescription preset(const std::string& name) {
  const auto& table = kind_defaults();
  if (auto it = table.find(name); it != table.end()) return it->second;
  if (name == "income-pareto") {
    ModelDescription d = table.at("income-jump");
    d.set("reset_sd", 0.0);
    return d;
  }
  if (name == "drift-reset") {
    ModelDescription d = table.at("income-drift");
    d.set("reset_sd", 0.0);
    return d;
  }
  throw ConfigError("unknown model preset: " + name);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& key, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ConfigError("line " + std::to_string(line) + ": bad value for '" + key + "'");
  }
  return v;
}

}  // namespace

ModelDescription parse_config(std::istream& is) {
  std::optional<ModelDescription> d;
  std::vector<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": bad section");
      if (d) throw ConfigError("line " + std::to_string(line) + ": only one section allowed");
      const std::string kind = trim(s.substr(1, s.size() - 2));
      const auto& table = kind_defaults();
      const auto it = table.find(kind);
      if (it == table.end()) {
        throw ConfigError("line " + std::to_string(line) + ": unknown model kind '" + kind + "'");
      }
      d = it->second;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    }
    if (!d) throw ConfigError("line " + std::to_string(line) + ": key before any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    }
    seen.push_back(key);
    const double v = parse_number(value, key, line);
    try {
      d->set(key, v);
    } catch (const ConfigError&) {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "' for model '" +
                        d->kind + "'");
    }
  }
  if (!d) throw ConfigError("config has no model section");
  return *d;
}

ModelDescription parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

std::string serialize_config(const ModelDescription& d) {
  std::ostringstream os;
  os << '[' << d.kind << "]\n";
  for (const auto& [k, v] : d.params) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << k << " = " << buf << '\n';
  }
  return os.str();
}

namespace {

std::size_t whole_periods(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
  return static_cast<std::size_t>(std::llround(t));
}

// Discrete-time transition: k applied round(t) times.
std::function<MarkovKernel(double)> periods_of(const MarkovKernel& k) {
  return [k](double t) {
    const std::size_t n = whole_periods(t);
    MarkovKernel out = k;
    out.step = [k, n](double x, Noise& noise) {
      for (std::size_t i = 0; i < n; ++i) x = k(x, noise);
      return x;
    };
    return out;
  };
}

std::function<MarkovKernel(double)> pdmp_transition(const PdmpSpec& spec) {
  return [spec](double t) { return time_sampler(spec, t); };
}

double positive_int(const ModelDescription& d, const std::string& key) {
  const double v = d.get(key);
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(key + " must be a positive integer");
  return v;
}

Model build_wage(const ModelDescription& d) {
  WageLadderConfig cfg;
  cfg.delta = d.get("delta");
  cfg.lambda = d.get("lambda");
  cfg.w_bar = d.get("w_bar");
  const double floor = d.get("offer_floor");
  if (!(floor >= 0.0 && floor <= cfg.w_bar)) throw ConfigError("offer_floor outside [0, w_bar]");
  cfg.q_u = WageMove::scaled_beta(d.get("destruction_a"), d.get("destruction_b"), 1.0, 0.0);
  cfg.q_e = WageMove::scaled_beta(d.get("offer_a"), d.get("offer_b"),
                                  (cfg.w_bar - floor) / cfg.w_bar, floor);
  cfg.mmc = MmcData{d.get("w_hat"), static_cast<int>(positive_int(d, "mmc_n")), std::nullopt};
  cfg.validate();
  const EpsilonEstimate eps = wage_epsilon(cfg);
  if (!(eps.lower > 0.0)) throw ConfigError("wage config fails the mixing condition");
  cfg.mmc->epsilon = eps.lower;

  Model m;
  m.name = "wage";
  m.pdmp = wage_pdmp_spec(cfg);
  m.event_kernel = wage_event_kernel(cfg);
  m.transition = [cfg](double t) { return wage_continuous_sampler(cfg, t); };
  m.compact = {{0.0, cfg.w_bar}};
  m.start_low = 0.0;
  m.start_high = cfg.w_bar;
  m.mmc = wage_mmc_constants(cfg);
  m.wage = cfg;
  m.long_run_spacing = 1.0 / (cfg.delta + cfg.lambda);
  m.embedded_is_stationary = true;
  return m;
}

Model build_belief(const ModelDescription& d) {
  BeliefShockConfig cfg;
  cfg.mu_h = d.get("mu_h");
  cfg.mu_l = d.get("mu_l");
  cfg.sigma = d.get("sigma");
  cfg.rho = d.get("rho");
  cfg.reset = BeliefShockConfig::iid_normal_reset(d.get("reset_mean"), d.get("reset_sd"));
  Model m;
  m.name = "belief";
  m.continuous_time = false;
  m.event_kernel = belief_kernel(cfg);
  m.transition = periods_of(m.event_kernel);
  m.start_low = -2.0;
  m.start_high = 2.0;
  return m;
}

ResetFunction reset_of(const ModelDescription& d) { return ResetFunction::constant(d.get("h")); }

Model build_income_jump(const ModelDescription& d) {
  PureJumpIncomeConfig cfg;
  cfg.lambda1 = d.get("lambda1");
  cfg.lambda2 = d.get("lambda2");
  cfg.raise_rate = d.get("raise_rate");
  cfg.reset_sd = d.get("reset_sd");
  cfg.h = reset_of(d);
  Model m;
  m.name = cfg.pareto_specialization() ? "income-pareto" : "income-jump";
  m.pdmp = pure_jump_spec(cfg);
  m.event_kernel = embedded_kernel(*m.pdmp);
  m.transition = pdmp_transition(*m.pdmp);
  if (cfg.pareto_specialization()) m.stationary = pure_jump_stationary_cdf(cfg);
  m.tail_exponent = pure_jump_tail_exponent(cfg);
  m.tail_transform = [](double x) { return std::exp(x); };
  m.start_low = cfg.h.inf_h - 2.0;
  m.start_high = cfg.h.sup_h + 2.0;
  m.reversal_rate = cfg.p() * reset_overtake_probability(cfg.reset_sd, cfg.h);
  m.long_run_spacing = 1.0 / (cfg.lambda1 + cfg.lambda2);
  m.embedded_is_stationary = true;
  return m;
}

Model build_income_drift(const ModelDescription& d) {
  DriftIncomeConfig cfg;
  cfg.mu = d.get("mu");
  cfg.lambda = d.get("lambda");
  cfg.reset_sd = d.get("reset_sd");
  cfg.h = reset_of(d);
  Model m;
  m.name = cfg.reset_sd == 0.0 ? "drift-reset" : "income-drift";
  m.pdmp = drift_income_spec(cfg);
  m.event_kernel = embedded_kernel(*m.pdmp);
  m.transition = pdmp_transition(*m.pdmp);
  if (cfg.reset_sd == 0.0 && cfg.mu > 0.0) m.stationary = drift_reset_stationary_cdf(cfg);
  if (cfg.mu > 0.0) m.tail_exponent = drift_reset_tail_exponent(cfg);
  m.tail_transform = [](double x) { return std::exp(x); };
  m.start_low = cfg.h.inf_h - 2.0;
  m.start_high = cfg.h.sup_h + 2.0;
  m.reversal_rate = reset_overtake_probability(cfg.reset_sd, cfg.h);
  // One recorded state per mean inter-jump time.
  m.long_run_spacing = 1.0 / cfg.lambda;
  return m;
}

Model build_ou(const ModelDescription& d) {
  OuConfig cfg{d.get("theta"), d.get("sigma")};
  cfg.validate();
  Model m;
  m.name = "ou";
  m.event_kernel = ou_exact_kernel(cfg, 1.0);
  m.transition = [cfg](double t) { return ou_exact_kernel(cfg, t); };
  m.stationary = ou_stationary_cdf(cfg);
  m.start_low = -10.0;
  m.start_high = 10.0;
  return m;
}

Model build_nonmonotone(const ModelDescription& d) {
  const double a = d.get("a");
  const double sd = d.get("sd");
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("nonmonotone a must lie in (0, 1)");
  if (!(sd >= 0.0)) throw ConfigError("nonmonotone sd must be >= 0");
  Model m;
  m.name = "nonmonotone";
  m.continuous_time = false;
  m.event_kernel = {[a, sd](double x, Noise& noise) { return -a * x + sd * noise.marks.normal(); },
                    "nonmonotone", false, false};
  m.transition = periods_of(m.event_kernel);
  m.stationary = AnalyticCdf::normal(0.0, sd / std::sqrt(1.0 - a * a));
  m.start_low = -2.0;
  m.start_high = 2.0;
  return m;
}

Model build_pareto(const ModelDescription& d) {
  const double alpha = d.get("alpha");
  const double scale = d.get("scale");
  if (!(alpha > 0.0) || !(scale > 0.0)) throw ConfigError("pareto alpha and scale must be > 0");
  Model m;
  m.name = "pareto";
  m.continuous_time = false;
  // iid draws: a constant map of the state, trivially monotone.
  m.event_kernel = {[alpha, scale](double, Noise& noise) {
                      return scale * std::pow(noise.marks.uniform(), -1.0 / alpha);
                    },
                    "pareto-iid", true, false};
  m.transition = periods_of(m.event_kernel);
  m.stationary = AnalyticCdf(
      [alpha, scale](double x) { return x <= scale ? 0.0 : 1.0 - std::pow(x / scale, -alpha); },
      scale, std::numeric_limits<double>::infinity(), {}, "pareto");
  m.tail_exponent = alpha;
  m.start_low = scale;
  m.start_high = 2.0 * scale;
  return m;
}

}  // namespace

Model build_model(const ModelDescription& d) {
  Model m;
  if (d.kind == "wage") {
    m = build_wage(d);
  } else if (d.kind == "belief") {
    m = build_belief(d);
  } else if (d.kind == "income-jump") {
    m = build_income_jump(d);
  } else if (d.kind == "income-drift") {
    m = build_income_drift(d);
  } else if (d.kind == "ou") {
    m = build_ou(d);
  } else if (d.kind == "nonmonotone") {
    m = build_nonmonotone(d);
  } else if (d.kind == "pareto") {
    m = build_pareto(d);
  } else {
    throw ConfigError("unknown model kind: " + d.kind);
  }
  if (!m.tail_transform) m.tail_transform = [](double x) { return x; };
  m.description = d;
  return m;
}

std::vector<double> long_run_samples(const Model& m, std::size_t n, std::size_t burn_in,
                                     const Noise& noise, double spacing, std::optional<double> x0) {
  if (n == 0) throw InvalidArgument("long run needs n > 0");
  Noise local = noise;
  double x = x0.value_or(m.start_low);
  std::vector<double> out;
  out.reserve(n);
  if (m.pdmp && !m.embedded_is_stationary) {
    const double dt = spacing > 0.0 ? spacing : m.long_run_spacing;
    for (std::size_t i = 0; i < burn_in + n; ++i) {
      x = advance(*m.pdmp, x, dt, local);
      if (!std::isfinite(x)) throw SimulationError("non-finite state", i + 1);
      if (i >= burn_in) out.push_back(x);
    }
    return out;
  }
  for (std::size_t i = 0; i < burn_in + n; ++i) {
    x = m.event_kernel(x, local);
    if (!std::isfinite(x)) throw SimulationError("non-finite state", i + 1);
    if (i >= burn_in) out.push_back(x);
  }
  return out;
}

}  // namespace mmm
