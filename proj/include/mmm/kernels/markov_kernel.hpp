#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmm/kernels/random_stream.hpp"
#include "mmm/prob/empirical.hpp"

namespace mmm {

// A stochastic kernel given by its sampler: next = step(state, noise).
//
// monotone_by_construction: for every fixed realization of the noise the
// sampler is nondecreasing in the state.
// event_driven: the sampler draws event times and types from noise.clock and
// shock values from noise.marks, with a state-independent number of draws
// from each. Required for shared-clock couplings.
struct MarkovKernel {
  using StepFn = std::function<double(double, Noise&)>;

  StepFn step;
  std::string name;
  bool monotone_by_construction = false;
  bool event_driven = false;

  double operator()(double x, Noise& noise) const { return step(x, noise); }

  static MarkovKernel identity();
  static MarkovKernel deterministic(std::function<double(double)> f, bool monotone,
                                    std::string name = "deterministic");
};

// (x0, x1, ..., x_steps). Throws SimulationError carrying the index of the
// first non-finite state.
std::vector<double> iterate(const MarkovKernel& k, double x0, std::size_t steps, Noise& noise);

// Final state of iterate without storing the path.
double iterate_final(const MarkovKernel& k, double x0, std::size_t steps, Noise& noise);

// Monte Carlo phi P^t: point i is moved by t steps driven by noise.split(i),
// keeping its weight. Points run in parallel; the result does not depend on
// the worker count.
EmpiricalDistribution push_forward(const MarkovKernel& k, const EmpiricalDistribution& phi,
                                   std::size_t t, const Noise& noise);

enum class CouplingMode { SharedNoise, Independent, SharedClockIndependentShocks };

const char* to_string(CouplingMode mode);
CouplingMode parse_coupling_mode(const std::string& s);

// Noise for the two chains of a coupling built from one base noise.
std::pair<Noise, Noise> couple_noise(const Noise& base, CouplingMode mode);

struct CoupledPaths {
  std::vector<double> a;
  std::vector<double> b;
};

// Throws ConfigError when a shared-clock coupling is requested for kernels
// that are not event driven.
CoupledPaths coupled_paths(const MarkovKernel& ka, const MarkovKernel& kb, double xa, double xb,
                           CouplingMode mode, std::size_t steps, const Noise& noise);

// First step k <= horizon at which the chain started at x_hi is at or below
// the chain started at x_lo; nullopt when the horizon is exceeded.
std::optional<std::size_t> order_reversal_time(const MarkovKernel& k, double x_hi, double x_lo,
                                               CouplingMode mode, std::size_t horizon,
                                               const Noise& noise);

// `step,state`.
void write_path_csv(std::ostream& os, const std::vector<double>& path);
// `step,state_a,state_b`.
void write_coupled_csv(std::ostream& os, const CoupledPaths& paths);

}  // namespace mmm
