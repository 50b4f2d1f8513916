#include "mmm/models/belief.hpp"

#include <cmath>

#include "mmm/error.hpp"

namespace mmm {

void BeliefShockConfig::validate() const {
  if (!(mu_h > mu_l)) throw ConfigError("belief model needs mu_h > mu_l");
  if (!(sigma > 0.0)) throw ConfigError("belief model needs sigma > 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("reset probability must lie in [0, 1]");
  if (!reset) throw ConfigError("belief model needs a reset kernel");
}

double BeliefShockConfig::mean_increment() const {
  const double d = mu_h - mu_l;
  return d * d / (2.0 * sigma * sigma);
}

std::function<double(double, RandomStream&)> BeliefShockConfig::iid_normal_reset(double mean,
                                                                                 double sd) {
  if (!(sd >= 0.0)) throw ConfigError("reset sd must be nonnegative");
  return [mean, sd](double, RandomStream& r) { return r.normal(mean, sd); };
}

BeliefShockConfig belief_default_config() {
  BeliefShockConfig cfg;
  cfg.reset = BeliefShockConfig::iid_normal_reset(0.0, 0.5);
  return cfg;
}

MarkovKernel belief_kernel(const BeliefShockConfig& cfg) {
  cfg.validate();
  MarkovKernel k;
  k.step = [cfg](double eta, Noise& noise) {
    const bool reset = noise.marks.bernoulli(cfg.rho);
    const double z = noise.marks.normal(cfg.mu_h, cfg.sigma);
    const double r = cfg.reset(eta, noise.marks);
    if (reset) return r;
    const double mid = 0.5 * (cfg.mu_h + cfg.mu_l);
    return eta + (cfg.mu_h - cfg.mu_l) * (z - mid) / (cfg.sigma * cfg.sigma);
  };
  k.name = "belief";
  k.monotone_by_construction = cfg.reset_monotone;
  k.event_driven = false;
  return k;
}

double logodds_to_prob(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

double prob_to_logodds(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw RangeError("probability must lie in (0, 1)");
  return std::log(pi / (1.0 - pi));
}

}  // namespace mmm
