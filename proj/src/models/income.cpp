#include "mmm/models/income.hpp"

#include <cmath>

#include "mmm/error.hpp"

namespace mmm {

ResetFunction ResetFunction::constant(double c) {
  return {[c](double) { return c; }, c, c, c};
}

ResetFunction ResetFunction::bounded(std::function<double(double)> h, double inf_h,
                                     double sup_h) {
  if (!h) throw ConfigError("reset function missing");
  if (!(inf_h <= sup_h) || !std::isfinite(inf_h) || !std::isfinite(sup_h)) {
    throw ConfigError("reset function needs finite declared bounds inf_h <= sup_h");
  }
  return {std::move(h), inf_h, sup_h, std::nullopt};
}

namespace {

void validate_reset(double sd, const ResetFunction& h) {
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw ConfigError("reset sd must be finite and >= 0");
  if (!h.h) throw ConfigError("reset function missing");
  if (!(h.inf_h <= h.sup_h)) throw ConfigError("reset function bounds out of order");
}

}  // namespace

void PureJumpIncomeConfig::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ConfigError("income rates must be positive");
  if (!(raise_rate > 0.0)) throw ConfigError("raise rate must be positive");
  validate_reset(reset_sd, h);
}

PureJumpIncomeConfig pure_jump_default_config() { return PureJumpIncomeConfig{}; }

PureJumpIncomeConfig pure_jump_pareto_config(double x0) {
  PureJumpIncomeConfig cfg;
  cfg.reset_sd = 0.0;
  cfg.h = ResetFunction::constant(x0);
  return cfg;
}

PdmpSpec pure_jump_spec(const PureJumpIncomeConfig& cfg) {
  cfg.validate();
  PdmpSpec spec;
  spec.flow = [](double x, double) { return x; };
  spec.rate = cfg.lambda1 + cfg.lambda2;
  const double q = cfg.q();
  const double theta = cfg.raise_rate;
  const double sd = cfg.reset_sd;
  spec.shock_sampler = [q, theta, sd](Noise& noise) {
    Shock s;
    s.kind = noise.clock.uniform() < q ? kIncomeRaise : kIncomeReset;
    const double raise = noise.marks.exponential(theta);
    const double zeta = noise.marks.normal(0.0, sd);
    s.value = s.kind == kIncomeRaise ? raise : zeta;
    return s;
  };
  const auto h = cfg.h.h;
  spec.jump_map = [h](double x, const Shock& s) {
    return s.kind == kIncomeRaise ? x + s.value : h(x) + s.value;
  };
  spec.flow_is_monotone = true;
  spec.jump_is_monotone = true;
  spec.name = "income-jump";
  return spec;
}

AnalyticCdf pure_jump_stationary_cdf(const PureJumpIncomeConfig& cfg) {
  cfg.validate();
  if (!cfg.pareto_specialization()) {
    throw UnsupportedConfiguration(
        "closed-form stationary law needs constant h and resets without noise");
  }
  const double x0 = *cfg.h.constant_value;
  const double p = cfg.p();
  const double q = cfg.q();
  const double decay = p * cfg.raise_rate;
  return AnalyticCdf(
      [=](double x) { return x < x0 ? 0.0 : p - q * std::expm1(-decay * (x - x0)); }, x0,
      std::numeric_limits<double>::infinity(), {{x0, p}}, "pure-jump-stationary");
}

double pure_jump_tail_exponent(const PureJumpIncomeConfig& cfg) {
  cfg.validate();
  return cfg.lambda2 * cfg.raise_rate / (cfg.lambda1 + cfg.lambda2);
}

double reset_overtake_probability(double reset_sd, const ResetFunction& h) {
  const double gap = h.sup_h - h.inf_h;
  if (reset_sd == 0.0) return gap <= 0.0 ? 1.0 : 0.0;
  // zeta' - zeta ~ N(0, 2 sd^2).
  return 1.0 - normal_cdf(gap / (reset_sd * std::sqrt(2.0)));
}

void DriftIncomeConfig::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("jump rate must be positive");
  if (!g && !std::isfinite(mu)) throw ConfigError("drift must be finite");
  validate_reset(reset_sd, h);
}

DriftIncomeConfig drift_income_default_config() { return DriftIncomeConfig{}; }

DriftIncomeConfig drift_reset_config() {
  DriftIncomeConfig cfg;
  cfg.reset_sd = 0.0;
  return cfg;
}

PdmpSpec drift_income_spec(const DriftIncomeConfig& cfg) {
  cfg.validate();
  PdmpSpec spec;
  if (cfg.constant_drift()) {
    const double mu = cfg.mu;
    spec.flow = [mu](double x, double t) { return x + mu * t; };
  } else {
    spec.flow = make_ode_flow(cfg.g);
    const auto check = [&] {
      try {
        return check_semi_flow(spec.flow, -5.0, 5.0, 2.0, 200, RandomStream(0x51F10u, 0), 1e-9);
      } catch (const Error& e) {
        throw ConfigError(std::string("drift flow failed: ") + e.what());
      }
    }();
    if (!check.holds) throw ConfigError("drift flow violates the semi-flow law");
  }
  spec.rate = cfg.lambda;
  const double sd = cfg.reset_sd;
  spec.shock_sampler = [sd](Noise& noise) { return Shock{0, noise.marks.normal(0.0, sd)}; };
  const auto h = cfg.h.h;
  spec.jump_map = [h](double x, const Shock& s) { return h(x) + s.value; };
  spec.flow_is_monotone = true;
  spec.jump_is_monotone = true;
  spec.name = "income-drift";
  return spec;
}

AnalyticCdf drift_reset_stationary_cdf(const DriftIncomeConfig& cfg) {
  cfg.validate();
  if (!cfg.constant_drift() || !(cfg.mu > 0.0) || !cfg.h.constant_value || cfg.reset_sd != 0.0) {
    throw UnsupportedConfiguration(
        "closed-form stationary law needs positive constant drift and a pure reset");
  }
  return AnalyticCdf::exponential(cfg.lambda / cfg.mu, *cfg.h.constant_value);
}

double drift_reset_tail_exponent(const DriftIncomeConfig& cfg) {
  if (!cfg.constant_drift() || !(cfg.mu > 0.0)) {
    throw UnsupportedConfiguration("tail exponent needs positive constant drift");
  }
  return cfg.lambda / cfg.mu;
}

}  // namespace mmm
