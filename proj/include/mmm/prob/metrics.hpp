#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mmm/prob/analytic_cdf.hpp"
#include "mmm/prob/empirical.hpp"

namespace mmm {

// sup_c |F_phi(c) - F_psi(c)|.
//
// Empirical pairs are compared exactly on the merged jump points. An
// empirical/analytic pair is also exact: on each gap between sample points
// the empirical CDF is flat and the analytic one monotone, so both one-sided
// limits at the sample points bound the gap. Two analytic CDFs are compared
// on a 4096-point grid over the effective support plus both sides of every
// atom, then the best cells are bisected until the gain drops below 1e-10.
double kolmogorov_distance(const EmpiricalDistribution& phi, const EmpiricalDistribution& psi);
double kolmogorov_distance(const EmpiricalDistribution& phi, const AnalyticCdf& psi);
double kolmogorov_distance(const AnalyticCdf& phi, const EmpiricalDistribution& psi);
double kolmogorov_distance(const AnalyticCdf& phi, const AnalyticCdf& psi);

// Bhattacharya distance on the real line: the supremum of |phi(h) - psi(h)|
// over nondecreasing h with |h| <= 1. On R the supremum is attained by
// h = 2 * 1{x >= c} - 1 (or its open-ray variant), giving twice the
// Kolmogorov distance.
template <typename A, typename B>
double bhattacharya_1d(const A& phi, const B& psi) {
  return 2.0 * kolmogorov_distance(phi, psi);
}

struct DominanceResult {
  bool holds = true;
  // Location where F_phi(c) < F_psi(c) - tolerance, when !holds.
  std::optional<double> witness;
  // True when the violation is at the left limit F(witness-).
  bool witness_is_left_limit = false;
  // max_c (F_psi(c) - F_phi(c)), zero or positive.
  double worst_gap = 0.0;

  explicit operator bool() const { return holds; }
};

inline constexpr double kDominanceTolerance = 1e-12;

// Tests phi <=_sd psi, i.e. F_phi(c) >= F_psi(c) for every c: psi puts at
// least as much mass on every upper ray as phi.
DominanceResult dominates_sd(const EmpiricalDistribution& phi, const EmpiricalDistribution& psi,
                             double tol = kDominanceTolerance);
DominanceResult dominates_sd(const EmpiricalDistribution& phi, const AnalyticCdf& psi,
                             double tol = kDominanceTolerance);
DominanceResult dominates_sd(const AnalyticCdf& phi, const EmpiricalDistribution& psi,
                             double tol = kDominanceTolerance);
DominanceResult dominates_sd(const AnalyticCdf& phi, const AnalyticCdf& psi,
                             double tol = kDominanceTolerance);

struct TightnessInterval {
  double epsilon;
  double lo;
  double hi;
};

// For each epsilon, the shortest [a, b] with endpoints among the pooled
// sample points such that every member puts mass >= 1 - epsilon on [a, b].
std::vector<TightnessInterval> tightness_profile(std::span<const EmpiricalDistribution> family,
                                                 std::span<const double> levels);

// Two-sided Dvoretzky-Kiefer-Wolfowitz half-width: with probability at least
// `confidence`, sup |F_n - F| <= dkw_band(n, confidence) for n iid draws.
double dkw_band(std::size_t n, double confidence);

}  // namespace mmm
