#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "mmm/kernels/markov_kernel.hpp"
#include "mmm/pdmp/pdmp.hpp"

namespace mmm {

// A randomized map w -> map(w, xi) with xi = draw(marks). Splitting the
// shock from the map lets the PDMP engine treat xi as the jump mark.
struct WageMove {
  std::function<double(RandomStream&)> draw;
  std::function<double(double w, double xi)> map;
  bool monotone = true;
  // Set when map(w, xi) = scale * w * xi + offset with xi ~ Beta(a, b).
  struct BetaForm {
    double a;
    double b;
    double scale;
    double offset;
  };
  std::optional<BetaForm> beta_form;

  double operator()(double w, RandomStream& marks) const { return map(w, draw(marks)); }

  // offset + scale * w * Beta(a, b).
  static WageMove scaled_beta(double a, double b, double scale, double offset);
};

// Pivot wage, step count and mixing probability for the monotone mixing
// condition. epsilon is filled by wage_epsilon when absent.
struct MmcData {
  double w_hat = 0.5;
  int n = 1;
  std::optional<double> epsilon;
};

struct WageLadderConfig {
  double delta = 0.1;      // job destruction rate
  double lambda = 0.5;     // offer arrival rate while employed
  double w_bar = 1.0;      // wage ceiling, state space [0, w_bar]
  WageMove q_u;            // wage after destruction
  WageMove q_e;            // outside offer
  std::optional<MmcData> mmc;

  void validate() const;
  double destruction_probability() const { return delta / (delta + lambda); }
};

// delta = 0.1, lambda = 0.5, w_bar = 1; destruction w * Beta(2, 8); offers
// 0.5 + 0.5 * w * Beta(8, 2); pivot 0.5 with n = 1.
WageLadderConfig wage_default_config();

inline constexpr int kWageDestruction = 0;
inline constexpr int kWageOffer = 1;

// One event: destruction with probability delta / (delta + lambda), else an
// offer accepted when it beats the current wage. The event type comes from
// noise.clock and the shock from noise.marks. Throws ModelError when a move
// leaves [0, w_bar].
MarkovKernel wage_event_kernel(const WageLadderConfig& cfg);

// Identity flow, rate delta + lambda, the event kernel as the jump.
PdmpSpec wage_pdmp_spec(const WageLadderConfig& cfg);

// P_t as a Poisson mixture: N ~ Poisson((delta + lambda) t) event steps.
MarkovKernel wage_continuous_sampler(const WageLadderConfig& cfg, double t);

struct MmcConstants {
  double kappa;
  double c;
  double alpha;
};

// kappa = e^{-(delta+lambda)} min(delta, lambda)^n / n! * epsilon,
// C = 2 / (1 - kappa), alpha = ln(1 / (1 - kappa)).
MmcConstants wage_mmc_constants(const WageLadderConfig& cfg);
MmcConstants mmc_constants(double delta, double lambda, int n, double epsilon);

struct EpsilonEstimate {
  double value;       // point value (exact when analytic)
  double lower = 0.0; // lower confidence bound, equal to value when analytic
  bool analytic = false;
  double confidence = 1.0;
};

// min(Q_u^n(w_bar, [0, w_hat]), Q_e^n(0, [w_hat, w_bar])). Exact through the
// Beta CDF when n = 1 and both moves have Beta form; otherwise Monte Carlo
// with 99% Hoeffding lower bounds on each side (98% jointly).
EpsilonEstimate wage_epsilon(const WageLadderConfig& cfg, std::size_t n_trials = 100000,
                             std::uint64_t seed = 0);

}  // namespace mmm
