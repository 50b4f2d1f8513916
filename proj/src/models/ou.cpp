#include "mmm/models/ou.hpp"

#include <cmath>

#include "mmm/error.hpp"

namespace mmm {

void OuConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("OU theta must be positive");
  // sigma = 0 is accepted as the deterministic limit.
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("OU sigma must be >= 0");
}

double OuConfig::sd_at(double t) const {
  return sigma * std::sqrt(-std::expm1(-2.0 * theta * t) / (2.0 * theta));
}

double OuConfig::stationary_sd() const { return sigma / std::sqrt(2.0 * theta); }

MarkovKernel ou_exact_kernel(const OuConfig& cfg, double t) {
  cfg.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
  const double decay = std::exp(-cfg.theta * t);
  const double sd = cfg.sd_at(t);
  MarkovKernel k;
  k.step = [decay, sd](double x, Noise& noise) { return decay * x + sd * noise.marks.normal(); };
  k.name = "ou";
  k.monotone_by_construction = true;
  k.event_driven = false;
  return k;
}

AnalyticCdf ou_exact_cdf(const OuConfig& cfg, double x0, double t) {
  cfg.validate();
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
  return AnalyticCdf::normal(std::exp(-cfg.theta * t) * x0, cfg.sd_at(t));
}

AnalyticCdf ou_stationary_cdf(const OuConfig& cfg) {
  cfg.validate();
  return AnalyticCdf::normal(0.0, cfg.stationary_sd());
}

}  // namespace mmm
