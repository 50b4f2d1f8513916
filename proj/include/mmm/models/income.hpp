#pragma once

#include <functional>
#include <optional>

#include "mmm/pdmp/pdmp.hpp"
#include "mmm/prob/analytic_cdf.hpp"

namespace mmm {

// Bounded nondecreasing reset function with its declared range.
struct ResetFunction {
  std::function<double(double)> h;
  double inf_h;
  double sup_h;
  // Set when h is constant.
  std::optional<double> constant_value;

  static ResetFunction constant(double c);
  // Rejects inf_h > sup_h; the artifact refuses undeclared (unbounded) h.
  static ResetFunction bounded(std::function<double(double)> h, double inf_h, double sup_h);
};

inline constexpr int kIncomeRaise = 0;
inline constexpr int kIncomeReset = 1;

// Log income with Exp(theta) raises at rate lambda1 and resets h(x) + zeta,
// zeta ~ N(0, reset_sd^2), at rate lambda2. reset_sd = 0 means nu = delta_0.
struct PureJumpIncomeConfig {
  double lambda1 = 1.0;
  double lambda2 = 0.1;
  double raise_rate = 20.0;
  double reset_sd = 0.3;
  ResetFunction h = ResetFunction::constant(0.0);

  void validate() const;
  double p() const { return lambda2 / (lambda1 + lambda2); }
  double q() const { return lambda1 / (lambda1 + lambda2); }
  // True for h constant and nu = delta_0: the closed-form stationary case.
  bool pareto_specialization() const { return h.constant_value.has_value() && reset_sd == 0.0; }
};

// lambda1 = 1, lambda2 = 0.1, raises Exp(20), resets N(0, 0.09), h = 0.
PureJumpIncomeConfig pure_jump_default_config();
// Same rates and raises with h = x0 and nu = delta_0.
PureJumpIncomeConfig pure_jump_pareto_config(double x0 = 0.0);

// Identity flow, rate lambda1 + lambda2. The jump kind (raise with
// probability q) comes from noise.clock; the raise and the reset shock are
// both drawn from noise.marks on every jump.
PdmpSpec pure_jump_spec(const PureJumpIncomeConfig& cfg);

// Atom p at x0, F(x) = 1 - q e^{-p theta (x - x0)} above. Throws
// UnsupportedConfiguration outside the Pareto specialization.
AnalyticCdf pure_jump_stationary_cdf(const PureJumpIncomeConfig& cfg);

// Tail index of Y = e^X: p * theta.
double pure_jump_tail_exponent(const PureJumpIncomeConfig& cfg);

// P{zeta' - zeta >= sup h - inf h} for independent reset shocks.
double reset_overtake_probability(double reset_sd, const ResetFunction& h);

// Log income with drift x' = g(x) between jumps at rate lambda and jump map
// h(x) + zeta.
struct DriftIncomeConfig {
  // Constant drift used when `g` is empty.
  double mu = 0.05;
  std::function<double(double)> g;
  double lambda = 0.15;
  double reset_sd = 0.3;
  ResetFunction h = ResetFunction::constant(0.0);

  void validate() const;
  bool constant_drift() const { return !g; }
};

// mu = 0.05, lambda = 0.15, h = 0, resets N(0, 0.09).
DriftIncomeConfig drift_income_default_config();
// Same rates with pure reset to h = 0 (nu = delta_0).
DriftIncomeConfig drift_reset_config();

// Flow x + mu t for constant drift, otherwise adaptive RK4 checked against
// the semi-flow law (ConfigError on failure). Shock values from noise.marks.
PdmpSpec drift_income_spec(const DriftIncomeConfig& cfg);

// Constant drift with pure reset to x0: X - x0 = mu * Age, Age ~ Exp(lambda),
// so X - x0 ~ Exp(lambda / mu). UnsupportedConfiguration otherwise.
AnalyticCdf drift_reset_stationary_cdf(const DriftIncomeConfig& cfg);
double drift_reset_tail_exponent(const DriftIncomeConfig& cfg);

}  // namespace mmm
