#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "mmm/error.hpp"

namespace mmm {

// Bounded increasing test function h: R -> [-1, 1].
class MonotoneObservable {
 public:
  using Evaluator = std::function<double(double)>;

  MonotoneObservable(Evaluator h, bool declared_monotone = true, std::string name = {})
      : h_(std::move(h)), monotone_(declared_monotone), name_(std::move(name)) {
    if (!h_) throw InvalidArgument("observable needs an evaluator");
  }

  // Throws RangeError when |h(x)| > 1.
  double operator()(double x) const {
    const double v = h_(x);
    if (!(std::abs(v) <= 1.0)) throw RangeError("observable value outside [-1, 1]");
    return v;
  }

  bool declared_monotone() const { return monotone_; }
  const std::string& name() const { return name_; }

  // Checks boundedness and monotonicity on sorted probe points.
  bool verify_on(std::span<const double> sorted_points) const {
    double prev = -2.0;
    for (double x : sorted_points) {
      const double v = h_(x);
      if (!(std::abs(v) <= 1.0) || v < prev) return false;
      prev = v;
    }
    return true;
  }

  static MonotoneObservable constant(double c) {
    return MonotoneObservable([c](double) { return c; }, true, "constant");
  }
  // 2 * 1{x >= c} - 1.
  static MonotoneObservable step(double c) {
    return MonotoneObservable([c](double x) { return x >= c ? 1.0 : -1.0; }, true, "step");
  }
  // 1{x > c}.
  static MonotoneObservable indicator_above(double c) {
    return MonotoneObservable([c](double x) { return x > c ? 1.0 : 0.0; }, true, "above");
  }
  // Maps [lo, hi] affinely onto [-1, 1], clamping outside.
  static MonotoneObservable rescaled(double lo, double hi) {
    if (!(lo < hi)) throw InvalidArgument("rescaled observable needs lo < hi");
    return MonotoneObservable(
        [lo, hi](double x) {
          const double v = 2.0 * (x - lo) / (hi - lo) - 1.0;
          return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
        },
        true, "rescaled");
  }
  static MonotoneObservable tanh() {
    return MonotoneObservable([](double x) { return std::tanh(x); }, true, "tanh");
  }

 private:
  Evaluator h_;
  bool monotone_;
  std::string name_;
};

}  // namespace mmm
