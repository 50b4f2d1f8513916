#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mmm {

// A finitely supported distribution on the real line: sorted points with
// nonnegative weights summing to one. Repeated points are kept, so a sample
// with ties carries an atom of the right mass.
class EmpiricalDistribution {
 public:
  // Uniformly weighted distribution of `samples`. Throws InvalidArgument on
  // an empty or non-finite sample.
  static EmpiricalDistribution from_samples(std::span<const double> samples);

  // Weighted distribution. Weights are normalised to sum to one; they must
  // be nonnegative with a positive total.
  static EmpiricalDistribution from_weighted(std::span<const double> values,
                                             std::span<const double> weights);

  static EmpiricalDistribution point_mass(double x);

  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  bool uniform_weights() const { return uniform_; }

  double min() const { return points_.front(); }
  double max() const { return points_.back(); }

  // F(c) = mass of (-inf, c].
  double cdf(double c) const;
  // F(c-) = mass of (-inf, c).
  double cdf_left(double c) const;
  // Cumulative mass through the i-th sorted point (inclusive).
  double cumulative(std::size_t i) const { return cumulative_[i]; }

  // Smallest point x with F(x) >= p, for p in (0, 1].
  double quantile(double p) const;

  double mean() const;
  double expectation(const std::function<double(double)>& h) const;

 private:
  EmpiricalDistribution() = default;
  void finish();

  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  bool uniform_ = true;
};

// Free-function spelling matching the rest of the API.
inline EmpiricalDistribution build_empirical(std::span<const double> samples) {
  return EmpiricalDistribution::from_samples(samples);
}

}  // namespace mmm
