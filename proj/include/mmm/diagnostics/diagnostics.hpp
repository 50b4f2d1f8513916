#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mmm/kernels/markov_kernel.hpp"
#include "mmm/prob/analytic_cdf.hpp"
#include "mmm/prob/empirical.hpp"
#include "mmm/prob/metrics.hpp"
#include "mmm/prob/observable.hpp"

namespace mmm {

// Sampler of X_t given X_0, for every t >= 0.
using TransitionFamily = std::function<MarkovKernel(double t)>;

using Target = std::variant<AnalyticCdf, EmpiricalDistribution>;

double bhattacharya_to(const EmpiricalDistribution& phi, const Target& target);

// n points of phi at the mid-quantiles (i + 0.5) / n.
std::vector<double> stratified_points(const EmpiricalDistribution& phi, std::size_t n);

struct Checkpoint {
  double t;
  double beta_hat;
  std::optional<double> bound;
};

struct ConvergenceReport {
  std::vector<Checkpoint> checkpoints;
  // log beta_hat = log C - alpha t over checkpoints above the noise floor.
  std::optional<double> fitted_rate;
  std::optional<double> fitted_prefactor;
  std::size_t fit_points = 0;
  // No checkpoint rose above the noise floor.
  bool already_converged = false;
  // DKW half-width for n_paths at the report confidence; beta_hat measured
  // against an exact target carries noise up to 2 * mc_band.
  double mc_band = 0.0;
  double confidence = 0.999;
  std::size_t n_paths = 0;
  std::string target_name;
};

// For each t, n_paths stratified starts from phi0 are moved by
// transition(t) (one stream per checkpoint and path) and compared with the
// target. Checkpoints must be nonempty and strictly increasing, n_paths
// at least 1000.
ConvergenceReport convergence_curve(const TransitionFamily& transition,
                                    const EmpiricalDistribution& phi0,
                                    std::span<const double> checkpoints, const Target& target,
                                    std::size_t n_paths, const Noise& noise,
                                    double confidence = 0.999);

// Fills report.checkpoints[i].bound = bound(t).
void attach_bound(ConvergenceReport& report, const std::function<double(double)>& bound);

struct DistancePoint {
  double t;
  double beta_hat;
};

// beta_hat(phi0 P_t, psi0 P_t). The i-th stratified points of both starts
// share their noise.
std::vector<DistancePoint> asymptotic_contractivity_curve(const TransitionFamily& transition,
                                                          const EmpiricalDistribution& phi0,
                                                          const EmpiricalDistribution& psi0,
                                                          std::span<const double> checkpoints,
                                                          std::size_t n_paths, const Noise& noise);

struct ErgodicAverage {
  // running[i] = mean of h over the first i + 1 post-burn-in states.
  std::vector<double> running;
  double mean = 0.0;
  // Batch-means standard error with floor(sqrt(n)) batches.
  double std_error = 0.0;
  std::size_t n = 0;
};

// Throws InvalidArgument unless h is declared monotone and burn_in leaves
// at least one state.
ErgodicAverage ergodic_average(std::span<const double> path, const MonotoneObservable& h,
                               std::size_t burn_in);
ErgodicAverage ergodic_average(const MarkovKernel& k, double x0, std::size_t steps,
                               std::size_t burn_in, const MonotoneObservable& h, Noise& noise);

struct TailEstimate {
  double alpha;
  std::size_t k;
  std::size_t n;
  double ci_lo;
  double ci_hi;
  double ci_level = 0.95;
  // Fit range: threshold (the (k+1)-th largest value) and the maximum.
  double threshold;
  double max;
};

// Default k: floor(n^{2/3}) capped at n / 10.
std::size_t default_hill_k(std::size_t n);

// Hill estimator on the k largest values with a 200-resample percentile
// bootstrap interval. k = 0 picks the default. Throws InsufficientData with
// fewer than 10 usable exceedances (or a nonpositive threshold), and
// InvalidArgument for an explicit k outside [10, n / 10].
TailEstimate hill_tail_exponent(std::span<const double> samples, std::size_t k = 0,
                                std::uint64_t seed = 0, std::size_t bootstrap = 200);

struct MmcEstimate {
  double p_up;       // P_u(a, [w_hat, inf))
  double p_down;     // P_u(b, (-inf, w_hat])
  double low_up;     // 99% Hoeffding lower bounds
  double low_down;
  double epsilon_low;  // min of the two, jointly at 98%
  double confidence = 0.98;
  std::size_t n_trials;
  bool certified() const { return epsilon_low > 0.0; }
};

MmcEstimate mmc_monte_carlo(const MarkovKernel& k, double a, double b, double w_hat,
                            std::size_t u_steps, std::size_t n_trials, const Noise& noise);

struct MixingReport {
  // survival[n] = fraction of replications with tau > n, n = 0..horizon.
  std::vector<double> survival;
  std::vector<double> std_error;  // sqrt(s (1 - s) / reps)
  std::vector<double> bound;      // empty without a theoretical overlay
  std::size_t replications = 0;
  std::string mode;
};

// Replication r uses noise.split(r). With rate set, bound[n] = (1 - rate)^n.
MixingReport order_reversal_survival(const MarkovKernel& k, double x_hi, double x_lo,
                                     CouplingMode mode, std::size_t horizon, std::size_t n_reps,
                                     const Noise& noise, std::optional<double> rate = {});

// Empirical tightness of the law of X_t from x0 at each time.
std::vector<std::vector<TightnessInterval>> trajectory_tightness(
    const TransitionFamily& transition, double x0, std::span<const double> times,
    std::size_t n_paths, std::span<const double> levels, const Noise& noise);

// Runs `trials` coupled pairs (x0 <= x0') with shared noise for `steps`
// steps and counts pairs whose order breaks at any step.
struct MonotoneCouplingResult {
  std::size_t trials = 0;
  std::size_t violations = 0;
  bool holds() const { return violations == 0; }
};
MonotoneCouplingResult monotone_coupling_test(const MarkovKernel& k, double lo, double hi,
                                              std::size_t trials, std::size_t steps,
                                              const Noise& noise);

// `t,beta_hat,bound`.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& r);

}  // namespace mmm
