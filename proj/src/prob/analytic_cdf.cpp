#include "mmm/prob/analytic_cdf.hpp"

#include <algorithm>
#include <cmath>

#include "mmm/error.hpp"

namespace mmm {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

AnalyticCdf::AnalyticCdf(Evaluator cdf, double support_lo, double support_hi,
                         std::vector<Atom> atoms, std::string name)
    : cdf_(std::move(cdf)),
      lo_(support_lo),
      hi_(support_hi),
      atoms_(std::move(atoms)),
      name_(std::move(name)) {
  if (!cdf_) throw InvalidArgument("analytic CDF needs an evaluator");
  if (!(lo_ <= hi_)) throw InvalidArgument("support_lo must not exceed support_hi");
  for (const Atom& a : atoms_) {
    if (!(a.mass > 0.0) || a.mass > 1.0 || !std::isfinite(a.location)) {
      throw InvalidArgument("atom must have finite location and mass in (0,1]");
    }
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
}

double AnalyticCdf::cdf(double c) const {
  if (c < lo_) return 0.0;
  if (c >= hi_) return 1.0;
  return std::clamp(cdf_(c), 0.0, 1.0);
}

double AnalyticCdf::cdf_left(double c) const {
  double v = cdf(c);
  for (const Atom& a : atoms_) {
    if (a.location == c) v -= a.mass;
  }
  return std::max(v, 0.0);
}

std::pair<double, double> AnalyticCdf::effective_support(double tail) const {
  double a = lo_;
  double b = hi_;
  if (!std::isfinite(a)) {
    double x = std::isfinite(b) ? std::min(b, 0.0) - 1.0 : -1.0;
    for (int i = 0; i < 2000 && cdf(x) > tail; ++i) x = 2.0 * x - 1.0;
    a = x;
  }
  if (!std::isfinite(b)) {
    double x = std::max(a, 0.0) + 1.0;
    for (int i = 0; i < 2000 && 1.0 - cdf(x) > tail; ++i) x = 2.0 * x + 1.0;
    b = x;
  }
  for (const Atom& at : atoms_) {
    a = std::min(a, at.location);
    b = std::max(b, at.location);
  }
  if (a == b) b = a + 1.0;
  return {a, b};
}

AnalyticCdf AnalyticCdf::point_mass(double x) {
  return AnalyticCdf([x](double c) { return c >= x ? 1.0 : 0.0; }, x, x, {{x, 1.0}},
                     "point_mass");
}

AnalyticCdf AnalyticCdf::normal(double mean, double sd) {
  if (sd == 0.0) return point_mass(mean);
  if (!(sd > 0.0)) throw InvalidArgument("normal sd must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  return AnalyticCdf([mean, sd](double c) { return normal_cdf((c - mean) / sd); }, -inf, inf,
                     {}, "normal");
}

AnalyticCdf AnalyticCdf::exponential(double rate, double shift) {
  if (!(rate > 0.0)) throw InvalidArgument("exponential rate must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  return AnalyticCdf(
      [rate, shift](double c) { return c <= shift ? 0.0 : -std::expm1(-rate * (c - shift)); },
      shift, inf, {}, "exponential");
}

AnalyticCdf AnalyticCdf::uniform(double a, double b) {
  if (!(a < b)) throw InvalidArgument("uniform needs a < b");
  return AnalyticCdf([a, b](double c) { return std::clamp((c - a) / (b - a), 0.0, 1.0); }, a,
                     b, {}, "uniform");
}

}  // namespace mmm
