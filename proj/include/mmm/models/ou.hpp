#pragma once

#include "mmm/kernels/markov_kernel.hpp"
#include "mmm/prob/analytic_cdf.hpp"

namespace mmm {

// dX = -theta X dt + sigma dW.
struct OuConfig {
  double theta = 1.0;
  double sigma = 1.0;

  void validate() const;
  // sigma * sqrt((1 - e^{-2 theta t}) / (2 theta)).
  double sd_at(double t) const;
  // sigma / sqrt(2 theta).
  double stationary_sd() const;
};

// Exact transition: e^{-theta t} x + sd_at(t) Z, Z from noise.marks.
MarkovKernel ou_exact_kernel(const OuConfig& cfg, double t);
AnalyticCdf ou_exact_cdf(const OuConfig& cfg, double x0, double t);
AnalyticCdf ou_stationary_cdf(const OuConfig& cfg);

}  // namespace mmm
