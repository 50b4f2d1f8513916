#pragma once

#include <functional>

#include "mmm/kernels/markov_kernel.hpp"

namespace mmm {

// Beliefs in log-odds space. A signal Z ~ N(mu_h, sigma^2) (true state h)
// moves eta by the log-likelihood ratio; with probability rho the belief is
// reset by Q instead.
struct BeliefShockConfig {
  double mu_h = 0.3;
  double mu_l = 0.0;
  double sigma = 1.0;
  double rho = 0.04;
  // Reset draw R ~ Q(eta, .). Must consume a state-independent number of
  // draws from the stream.
  std::function<double(double eta, RandomStream&)> reset;
  bool reset_monotone = true;

  void validate() const;

  // Mean log-likelihood-ratio increment under the true state,
  // (mu_h - mu_l)^2 / (2 sigma^2).
  double mean_increment() const;

  // Resets iid N(mean, sd^2), independent of eta.
  static std::function<double(double, RandomStream&)> iid_normal_reset(double mean, double sd);
};

// mu_h = 0.3, mu_l = 0, sigma = 1, rho = 0.04, resets iid N(0, 0.5^2).
BeliefShockConfig belief_default_config();

// eta' = I R + (1 - I)(eta + xi), xi = (mu_h - mu_l)(Z - (mu_h + mu_l)/2) / sigma^2.
// Draws I, Z and R on every step, all from noise.marks.
MarkovKernel belief_kernel(const BeliefShockConfig& cfg);

// pi = 1 / (1 + e^{-eta}).
double logodds_to_prob(double eta);
// Throws RangeError unless pi lies in (0, 1).
double prob_to_logodds(double pi);

}  // namespace mmm
