#include "mmm/models/wage.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "mmm/error.hpp"

namespace mmm {

WageMove WageMove::scaled_beta(double a, double b, double scale, double offset) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("Beta parameters must be positive");
  if (!(scale >= 0.0)) throw InvalidArgument("Beta move scale must be nonnegative");
  WageMove m;
  m.draw = [a, b](RandomStream& r) { return r.beta(a, b); };
  m.map = [scale, offset](double w, double xi) { return offset + scale * w * xi; };
  m.monotone = true;
  m.beta_form = BetaForm{a, b, scale, offset};
  return m;
}

void WageLadderConfig::validate() const {
  if (!(delta > 0.0) || !(lambda > 0.0)) throw ConfigError("wage rates must be positive");
  if (!(w_bar > 0.0) || !std::isfinite(w_bar)) throw ConfigError("w_bar must be positive");
  if (!q_u.draw || !q_u.map || !q_e.draw || !q_e.map) {
    throw ConfigError("wage model needs both moves");
  }
  if (mmc) {
    if (!(mmc->w_hat >= 0.0 && mmc->w_hat <= w_bar)) throw ConfigError("w_hat outside [0, w_bar]");
    if (mmc->n < 1) throw ConfigError("mmc n must be >= 1");
    if (mmc->epsilon && !(*mmc->epsilon > 0.0 && *mmc->epsilon <= 1.0)) {
      throw ConfigError("mmc epsilon must lie in (0, 1]");
    }
  }
}

WageLadderConfig wage_default_config() {
  WageLadderConfig cfg;
  cfg.delta = 0.1;
  cfg.lambda = 0.5;
  cfg.w_bar = 1.0;
  cfg.q_u = WageMove::scaled_beta(2.0, 8.0, 1.0, 0.0);
  cfg.q_e = WageMove::scaled_beta(8.0, 2.0, 0.5, 0.5);
  cfg.mmc = MmcData{0.5, 1, std::nullopt};
  return cfg;
}

namespace {

double checked(double w, double w_bar) {
  if (!(w >= 0.0 && w <= w_bar)) throw ModelError("wage move left [0, w_bar]");
  return w;
}

double apply_event(const WageLadderConfig& cfg, double w, const Shock& s) {
  if (s.kind == kWageDestruction) return checked(cfg.q_u.map(w, s.value), cfg.w_bar);
  return std::max(w, checked(cfg.q_e.map(w, s.value), cfg.w_bar));
}

Shock draw_event(const WageLadderConfig& cfg, Noise& noise) {
  Shock s;
  s.kind = noise.clock.uniform() < cfg.destruction_probability() ? kWageDestruction : kWageOffer;
  s.value = s.kind == kWageDestruction ? cfg.q_u.draw(noise.marks) : cfg.q_e.draw(noise.marks);
  return s;
}

}  // namespace

MarkovKernel wage_event_kernel(const WageLadderConfig& cfg) {
  cfg.validate();
  MarkovKernel k;
  k.step = [cfg](double w, Noise& noise) { return apply_event(cfg, w, draw_event(cfg, noise)); };
  k.name = "wage-event";
  k.monotone_by_construction = cfg.q_u.monotone && cfg.q_e.monotone;
  k.event_driven = true;
  return k;
}

PdmpSpec wage_pdmp_spec(const WageLadderConfig& cfg) {
  cfg.validate();
  PdmpSpec spec;
  spec.flow = [](double x, double) { return x; };
  spec.rate = cfg.delta + cfg.lambda;
  spec.shock_sampler = [cfg](Noise& noise) { return draw_event(cfg, noise); };
  spec.jump_map = [cfg](double w, const Shock& s) { return apply_event(cfg, w, s); };
  spec.flow_is_monotone = true;
  spec.jump_is_monotone = cfg.q_u.monotone && cfg.q_e.monotone;
  spec.name = "wage";
  return spec;
}

MarkovKernel wage_continuous_sampler(const WageLadderConfig& cfg, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
  MarkovKernel event = wage_event_kernel(cfg);
  const double mean = (cfg.delta + cfg.lambda) * t;
  MarkovKernel k;
  k.step = [event, mean](double w, Noise& noise) {
    const std::uint64_t n = noise.clock.poisson(mean);
    for (std::uint64_t i = 0; i < n; ++i) w = event(w, noise);
    return w;
  };
  k.name = "wage-continuous";
  k.monotone_by_construction = event.monotone_by_construction;
  k.event_driven = true;
  return k;
}

MmcConstants mmc_constants(double delta, double lambda, int n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const double kappa = std::exp(-(delta + lambda) + n * std::log(std::min(delta, lambda)) -
                                std::lgamma(n + 1.0)) *
                       epsilon;
  if (!(kappa > 0.0 && kappa < 1.0)) throw ModelError("kappa outside (0, 1)");
  return {kappa, 2.0 / (1.0 - kappa), -std::log1p(-kappa)};
}

MmcConstants wage_mmc_constants(const WageLadderConfig& cfg) {
  cfg.validate();
  if (!cfg.mmc) throw ConfigError("wage config carries no mixing data");
  const double eps = cfg.mmc->epsilon ? *cfg.mmc->epsilon : wage_epsilon(cfg).lower;
  return mmc_constants(cfg.delta, cfg.lambda, cfg.mmc->n, eps);
}

EpsilonEstimate wage_epsilon(const WageLadderConfig& cfg, std::size_t n_trials,
                             std::uint64_t seed) {
  cfg.validate();
  if (!cfg.mmc) throw ConfigError("wage config carries no mixing data");
  const double w_hat = cfg.mmc->w_hat;
  const int n = cfg.mmc->n;

  if (n == 1 && cfg.q_u.beta_form && cfg.q_e.beta_form) {
    // Q_u(w_bar, [0, w_hat]) = P{offset + scale * w_bar * B <= w_hat}.
    const auto& u = *cfg.q_u.beta_form;
    const auto& e = *cfg.q_e.beta_form;
    auto beta_cdf = [](double a, double b, double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(a, b, x);
    };
    const double span_u = u.scale * cfg.w_bar;
    const double down = span_u > 0.0 ? beta_cdf(u.a, u.b, (w_hat - u.offset) / span_u)
                                     : (u.offset <= w_hat ? 1.0 : 0.0);
    // From 0 the offer is exactly the offset.
    const double up = e.offset >= w_hat ? 1.0 : 0.0;
    const double eps = std::min(down, up);
    return {eps, eps, true, 1.0};
  }

  if (n_trials == 0) throw InvalidArgument("n_trials must be positive");
  Noise base(seed, 0x5E9511u);
  RandomStream ru = base.marks.split(0);
  RandomStream re = base.marks.split(1);
  std::size_t hits_down = 0;
  std::size_t hits_up = 0;
  for (std::size_t i = 0; i < n_trials; ++i) {
    double w = cfg.w_bar;
    for (int j = 0; j < n; ++j) w = cfg.q_u(w, ru);
    if (w <= w_hat) ++hits_down;
    double v = 0.0;
    for (int j = 0; j < n; ++j) v = cfg.q_e(v, re);
    if (v >= w_hat) ++hits_up;
  }
  const double nt = static_cast<double>(n_trials);
  const double p = std::min(hits_down, hits_up) / nt;
  const double slack = std::sqrt(std::log(100.0) / (2.0 * nt));
  // Each side holds at 99%, so the minimum holds at 98%.
  return {p, std::max(0.0, p - slack), false, 0.98};
}

}  // namespace mmm
