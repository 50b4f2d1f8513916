#include "mmm/prob/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmm/error.hpp"

namespace mmm {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const double> samples) {
  if (samples.empty()) throw InvalidArgument("empty sample");
  for (double x : samples) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite sample");
  }
  EmpiricalDistribution d;
  d.points_.assign(samples.begin(), samples.end());
  std::sort(d.points_.begin(), d.points_.end());
  const double w = 1.0 / static_cast<double>(d.points_.size());
  d.weights_.assign(d.points_.size(), w);
  d.uniform_ = true;
  d.finish();
  return d;
}

EmpiricalDistribution EmpiricalDistribution::from_weighted(std::span<const double> values,
                                                           std::span<const double> weights) {
  if (values.empty()) throw InvalidArgument("empty sample");
  if (values.size() != weights.size()) {
    throw InvalidArgument("values and weights differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InvalidArgument("non-finite sample");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("weights must be finite and nonnegative");
    }
    total += weights[i];
  }
  if (!(total > 0.0)) throw InvalidArgument("weights sum to zero");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  EmpiricalDistribution d;
  d.points_.reserve(values.size());
  d.weights_.reserve(values.size());
  for (std::size_t i : order) {
    d.points_.push_back(values[i]);
    d.weights_.push_back(weights[i] / total);
  }
  const double first = d.weights_.front();
  d.uniform_ = std::all_of(d.weights_.begin(), d.weights_.end(),
                           [first](double w) { return w == first; });
  d.finish();
  return d;
}

EmpiricalDistribution EmpiricalDistribution::point_mass(double x) {
  const double v[1] = {x};
  return from_samples(v);
}

void EmpiricalDistribution::finish() {
  const std::size_t n = points_.size();
  cumulative_.resize(n);
  if (uniform_) {
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) cumulative_[i] = static_cast<double>(i + 1) / dn;
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += weights_[i];
      cumulative_[i] = acc;
    }
    cumulative_.back() = 1.0;
  }
}

double EmpiricalDistribution::cdf(double c) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), c);
  if (it == points_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double EmpiricalDistribution::cdf_left(double c) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), c);
  if (it == points_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p > 0.0) || p > 1.0) throw RangeError("quantile level must lie in (0, 1]");
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
  if (it == cumulative_.end()) return points_.back();
  return points_[static_cast<std::size_t>(it - cumulative_.begin())];
}

double EmpiricalDistribution::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) acc += weights_[i] * points_[i];
  return acc;
}

double EmpiricalDistribution::expectation(const std::function<double(double)>& h) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) acc += weights_[i] * h(points_[i]);
  return acc;
}

}  // namespace mmm
