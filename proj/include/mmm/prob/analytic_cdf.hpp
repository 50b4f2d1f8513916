#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace mmm {

struct Atom {
  double location;
  double mass;
};

// A distribution on the real line given by a closed-form CDF. The evaluator
// must be right-continuous and nondecreasing, include the jumps of every
// listed atom, and tend to 0 and 1 at the support endpoints.
class AnalyticCdf {
 public:
  using Evaluator = std::function<double(double)>;

  AnalyticCdf(Evaluator cdf, double support_lo, double support_hi,
              std::vector<Atom> atoms = {}, std::string name = {});

  double cdf(double c) const;
  double cdf_left(double c) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::string& name() const { return name_; }

  // Finite interval outside of which the CDF is within `tail` of 0 or 1.
  std::pair<double, double> effective_support(double tail = 1e-13) const;

  static AnalyticCdf point_mass(double x);
  static AnalyticCdf normal(double mean, double sd);
  static AnalyticCdf exponential(double rate, double shift = 0.0);
  static AnalyticCdf uniform(double a, double b);

 private:
  Evaluator cdf_;
  double lo_;
  double hi_;
  std::vector<Atom> atoms_;
  std::string name_;
};

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace mmm
