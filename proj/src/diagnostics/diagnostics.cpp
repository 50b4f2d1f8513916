#include "mmm/diagnostics/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mmm/error.hpp"
#include "mmm/kernels/parallel.hpp"
#include "mmm/prob/io.hpp"

namespace mmm {

double bhattacharya_to(const EmpiricalDistribution& phi, const Target& target) {
  return std::visit([&](const auto& t) { return bhattacharya_1d(phi, t); }, target);
}

std::vector<double> stratified_points(const EmpiricalDistribution& phi, std::size_t n) {
  if (n == 0) throw InvalidArgument("need at least one point");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = phi.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return out;
}

namespace {

void check_checkpoints(std::span<const double> checkpoints) {
  if (checkpoints.empty()) throw InvalidArgument("checkpoints must be nonempty");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] >= 0.0) || !std::isfinite(checkpoints[i])) {
      throw InvalidArgument("checkpoints must be finite and >= 0");
    }
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) {
      throw InvalidArgument("checkpoints must be strictly increasing");
    }
  }
}

std::vector<double> move_points(const MarkovKernel& k, const std::vector<double>& starts,
                                const Noise& noise) {
  std::vector<double> out(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    Noise local = noise.split(i);
    out[i] = k(starts[i], local);
    if (!std::isfinite(out[i])) throw SimulationError("non-finite state", i);
  });
  return out;
}

std::string target_name(const Target& target) {
  if (const auto* a = std::get_if<AnalyticCdf>(&target)) {
    return a->name().empty() ? "analytic" : a->name();
  }
  return "empirical";
}

}  // namespace

ConvergenceReport convergence_curve(const TransitionFamily& transition,
                                    const EmpiricalDistribution& phi0,
                                    std::span<const double> checkpoints, const Target& target,
                                    std::size_t n_paths, const Noise& noise, double confidence) {
  check_checkpoints(checkpoints);
  if (n_paths < 1000) throw InvalidArgument("convergence_curve needs n_paths >= 1000");
  ConvergenceReport r;
  r.mc_band = dkw_band(n_paths, confidence);
  r.confidence = confidence;
  r.n_paths = n_paths;
  r.target_name = target_name(target);
  const std::vector<double> starts = stratified_points(phi0, n_paths);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const double t = checkpoints[c];
    const std::vector<double> moved = move_points(transition(t), starts, noise.split(c));
    const double b = bhattacharya_to(EmpiricalDistribution::from_samples(moved), target);
    r.checkpoints.push_back({t, b, std::nullopt});
  }

  std::vector<double> ts;
  std::vector<double> ys;
  for (const auto& cp : r.checkpoints) {
    if (cp.beta_hat > 4.0 * r.mc_band) {
      ts.push_back(cp.t);
      ys.push_back(std::log(cp.beta_hat));
    }
  }
  r.fit_points = ts.size();
  if (ts.empty()) {
    r.already_converged = true;
  } else if (ts.size() >= 2) {
    const double n = static_cast<double>(ts.size());
    const double mt = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      sxx += (ts[i] - mt) * (ts[i] - mt);
      sxy += (ts[i] - mt) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    r.fitted_rate = -slope;
    r.fitted_prefactor = std::exp(my - slope * mt);
  }
  return r;
}

void attach_bound(ConvergenceReport& report, const std::function<double(double)>& bound) {
  for (auto& cp : report.checkpoints) cp.bound = bound(cp.t);
}

std::vector<DistancePoint> asymptotic_contractivity_curve(const TransitionFamily& transition,
                                                          const EmpiricalDistribution& phi0,
                                                          const EmpiricalDistribution& psi0,
                                                          std::span<const double> checkpoints,
                                                          std::size_t n_paths,
                                                          const Noise& noise) {
  check_checkpoints(checkpoints);
  if (n_paths < 1000) throw InvalidArgument("contractivity curve needs n_paths >= 1000");
  const std::vector<double> a0 = stratified_points(phi0, n_paths);
  const std::vector<double> b0 = stratified_points(psi0, n_paths);
  std::vector<DistancePoint> out;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const MarkovKernel k = transition(checkpoints[c]);
    const Noise n = noise.split(c);
    const auto a = EmpiricalDistribution::from_samples(move_points(k, a0, n));
    const auto b = EmpiricalDistribution::from_samples(move_points(k, b0, n));
    out.push_back({checkpoints[c], bhattacharya_1d(a, b)});
  }
  return out;
}

ErgodicAverage ergodic_average(std::span<const double> path, const MonotoneObservable& h,
                               std::size_t burn_in) {
  if (!h.declared_monotone()) throw InvalidArgument("observable must be declared monotone");
  if (burn_in >= path.size()) throw InvalidArgument("burn-in leaves no states");
  ErgodicAverage out;
  out.n = path.size() - burn_in;
  out.running.reserve(out.n);
  std::vector<double> values(out.n);
  double acc = 0.0;
  for (std::size_t i = 0; i < out.n; ++i) {
    values[i] = h(path[burn_in + i]);
    acc += values[i];
    out.running.push_back(acc / static_cast<double>(i + 1));
  }
  out.mean = out.running.back();

  const std::size_t batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(out.n)));
  if (batches >= 2) {
    const std::size_t size = out.n / batches;
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
      double s = 0.0;
      for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += values[i];
      means[b] = s / static_cast<double>(size);
    }
    const double m = std::accumulate(means.begin(), means.end(), 0.0) / batches;
    double ss = 0.0;
    for (double x : means) ss += (x - m) * (x - m);
    out.std_error = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  }
  return out;
}

ErgodicAverage ergodic_average(const MarkovKernel& k, double x0, std::size_t steps,
                               std::size_t burn_in, const MonotoneObservable& h, Noise& noise) {
  const std::vector<double> path = iterate(k, x0, steps, noise);
  return ergodic_average(path, h, burn_in);
}

std::size_t default_hill_k(std::size_t n) {
  // cbrt is exact on perfect cubes, unlike pow(n, 2.0 / 3.0).
  const double c = std::cbrt(static_cast<double>(n));
  const auto k = static_cast<std::size_t>(std::floor(c * c + 1e-9));
  return std::min(k, n / 10);
}

namespace {

// Hill estimate with the k largest entries of `v` (reordered in place).
double hill_inplace(std::vector<double>& v, std::size_t k) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + (n - k - 1), v.end());
  const double threshold = v[n - k - 1];
  if (!(threshold > 0.0)) throw InsufficientData("Hill threshold must be positive");
  const double lt = std::log(threshold);
  double s = 0.0;
  for (std::size_t i = n - k; i < n; ++i) s += std::log(v[i]) - lt;
  if (!(s > 0.0)) throw InsufficientData("no spread above the Hill threshold");
  return static_cast<double>(k) / s;
}

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TailEstimate hill_tail_exponent(std::span<const double> samples, std::size_t k,
                                std::uint64_t seed, std::size_t bootstrap) {
  const std::size_t n = samples.size();
  for (double x : samples) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite sample");
  }
  if (k == 0) {
    k = default_hill_k(n);
    if (k < 10) throw InsufficientData("fewer than 10 tail exceedances");
  } else if (k < 10 || k > n / 10) {
    throw InvalidArgument("Hill k must lie in [10, n / 10]");
  }
  std::vector<double> work(samples.begin(), samples.end());
  TailEstimate out;
  out.k = k;
  out.n = n;
  out.alpha = hill_inplace(work, k);
  out.threshold = work[n - k - 1];
  out.max = *std::max_element(work.begin() + (n - k), work.end());

  std::vector<double> reps(bootstrap, out.alpha);
  if (bootstrap > 0) {
    const Noise base(seed, 0xB0075u);
    parallel_for(bootstrap, [&](std::size_t b) {
      RandomStream r = base.marks.split(b);
      std::vector<double> resample(n);
      for (std::size_t i = 0; i < n; ++i) resample[i] = samples[r.uniform_index(n)];
      try {
        reps[b] = hill_inplace(resample, k);
      } catch (const InsufficientData&) {
        reps[b] = std::numeric_limits<double>::infinity();
      }
    });
    out.ci_lo = percentile(reps, 0.025);
    out.ci_hi = percentile(reps, 0.975);
  } else {
    out.ci_lo = out.ci_hi = out.alpha;
  }
  return out;
}

MmcEstimate mmc_monte_carlo(const MarkovKernel& k, double a, double b, double w_hat,
                            std::size_t u_steps, std::size_t n_trials, const Noise& noise) {
  if (!(a <= w_hat && w_hat <= b)) throw InvalidArgument("need a <= w_hat <= b");
  if (n_trials < 1000) throw InvalidArgument("mmc_monte_carlo needs n_trials >= 1000");
  if (u_steps < 1) throw InvalidArgument("mmc_monte_carlo needs u_steps >= 1");
  std::vector<unsigned char> up(n_trials);
  std::vector<unsigned char> down(n_trials);
  const Noise nu = noise.split(0);
  const Noise nd = noise.split(1);
  parallel_for(n_trials, [&](std::size_t i) {
    Noise l1 = nu.split(i);
    Noise l2 = nd.split(i);
    up[i] = iterate_final(k, a, u_steps, l1) >= w_hat;
    down[i] = iterate_final(k, b, u_steps, l2) <= w_hat;
  });
  const double n = static_cast<double>(n_trials);
  MmcEstimate e;
  e.n_trials = n_trials;
  e.p_up = std::accumulate(up.begin(), up.end(), 0.0) / n;
  e.p_down = std::accumulate(down.begin(), down.end(), 0.0) / n;
  const double slack = std::sqrt(std::log(100.0) / (2.0 * n));
  e.low_up = std::max(0.0, e.p_up - slack);
  e.low_down = std::max(0.0, e.p_down - slack);
  e.epsilon_low = std::min(e.low_up, e.low_down);
  return e;
}

MixingReport order_reversal_survival(const MarkovKernel& k, double x_hi, double x_lo,
                                     CouplingMode mode, std::size_t horizon, std::size_t n_reps,
                                     const Noise& noise, std::optional<double> rate) {
  if (n_reps < 1000) throw InvalidArgument("order_reversal_survival needs n_reps >= 1000");
  std::vector<std::optional<std::size_t>> taus(n_reps);
  parallel_for(n_reps, [&](std::size_t r) {
    taus[r] = order_reversal_time(k, x_hi, x_lo, mode, horizon, noise.split(r));
  });
  MixingReport out;
  out.replications = n_reps;
  out.mode = to_string(mode);
  out.survival.assign(horizon + 1, 0.0);
  out.std_error.assign(horizon + 1, 0.0);
  for (std::size_t n = 0; n <= horizon; ++n) {
    std::size_t alive = 0;
    for (const auto& tau : taus) {
      if (!tau || *tau > n) ++alive;
    }
    const double s = static_cast<double>(alive) / static_cast<double>(n_reps);
    out.survival[n] = s;
    out.std_error[n] = std::sqrt(s * (1.0 - s) / static_cast<double>(n_reps));
  }
  if (rate) {
    out.bound.resize(horizon + 1);
    for (std::size_t n = 0; n <= horizon; ++n) {
      out.bound[n] = std::pow(1.0 - *rate, static_cast<double>(n));
    }
  }
  return out;
}

std::vector<std::vector<TightnessInterval>> trajectory_tightness(
    const TransitionFamily& transition, double x0, std::span<const double> times,
    std::size_t n_paths, std::span<const double> levels, const Noise& noise) {
  check_checkpoints(times);
  std::vector<std::vector<TightnessInterval>> out;
  const std::vector<double> starts(n_paths, x0);
  for (std::size_t c = 0; c < times.size(); ++c) {
    const auto law =
        EmpiricalDistribution::from_samples(move_points(transition(times[c]), starts, noise.split(c)));
    out.push_back(tightness_profile(std::span<const EmpiricalDistribution>(&law, 1), levels));
  }
  return out;
}

MonotoneCouplingResult monotone_coupling_test(const MarkovKernel& k, double lo, double hi,
                                              std::size_t trials, std::size_t steps,
                                              const Noise& noise) {
  MonotoneCouplingResult out;
  out.trials = trials;
  std::vector<unsigned char> bad(trials, 0);
  parallel_for(trials, [&](std::size_t i) {
    const Noise trial = noise.split(i);
    RandomStream starts = trial.marks.split(0xA11CE);
    double a = lo + (hi - lo) * starts.uniform();
    double b = lo + (hi - lo) * starts.uniform();
    if (b < a) std::swap(a, b);
    Noise na = trial;
    Noise nb = trial;
    for (std::size_t s = 0; s < steps; ++s) {
      a = k(a, na);
      b = k(b, nb);
      if (!(a <= b)) {
        bad[i] = 1;
        return;
      }
    }
  });
  out.violations = std::accumulate(bad.begin(), bad.end(), std::size_t{0});
  return out;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& r) {
  os << "t,beta_hat,bound\n";
  for (const auto& cp : r.checkpoints) {
    os << format_double(cp.t) << ',' << format_double(cp.beta_hat) << ',';
    if (cp.bound) os << format_double(*cp.bound);
    os << '\n';
  }
}

}  // namespace mmm
