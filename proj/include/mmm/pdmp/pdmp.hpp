#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mmm/kernels/markov_kernel.hpp"
#include "mmm/kernels/random_stream.hpp"

namespace mmm {

// One jump mark. `kind` selects a branch of the jump map (e.g. raise or
// reset); `value` is the continuous part.
struct Shock {
  int kind = 0;
  double value = 0.0;
};

// Piecewise deterministic Markov process with constant jump rate.
//
// Inter-jump times are Exp(rate) draws from noise.clock. The shock sampler
// must draw the shock kind (if any) from noise.clock and its value from
// noise.marks, with a state-independent number of draws.
struct PdmpSpec {
  using Flow = std::function<double(double x, double elapsed)>;
  using ShockSampler = std::function<Shock(Noise&)>;
  using JumpMap = std::function<double(double x, const Shock&)>;

  Flow flow;
  double rate = 1.0;
  ShockSampler shock_sampler;
  JumpMap jump_map;
  bool flow_is_monotone = false;
  bool jump_is_monotone = false;
  std::string name;

  // Throws InvalidArgument on missing characteristics or a bad rate.
  void validate() const;
  bool monotone() const { return flow_is_monotone && jump_is_monotone; }
};

// Jump skeleton T_0 = 0 < T_1 < ... <= horizon with post-jump states Z_n.
// Keeps the noise position and the already drawn next jump time, so a path
// can be extended and match a single longer simulation bit for bit.
class PdmpPath {
 public:
  const PdmpSpec& spec() const { return *spec_; }
  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& states() const { return states_; }
  // Shock kind of jump n (entry 0 belongs to the start and is -1).
  const std::vector<int>& shock_kinds() const { return kinds_; }
  double horizon() const { return horizon_; }
  std::size_t jump_count() const { return times_.size() - 1; }

  // X_t = flow(Z_{N_t}, t - T_{N_t}); right-continuous at jumps. Throws
  // RangeError for t outside [0, horizon].
  double state_at(double t) const;

  // State at the horizon.
  double final_state() const { return state_at(horizon_); }

 private:
  friend PdmpPath simulate_path(std::shared_ptr<const PdmpSpec>, double, double, const Noise&);
  friend void extend_path(PdmpPath&, double);

  std::shared_ptr<const PdmpSpec> spec_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<int> kinds_;
  double horizon_ = 0.0;
  double next_jump_ = 0.0;
  Noise noise_;
};

// Exact event-driven simulation on [0, horizon], horizon >= 0. Throws
// SimulationError with the jump index on a non-finite state.
PdmpPath simulate_path(std::shared_ptr<const PdmpSpec> spec, double x0, double horizon,
                       const Noise& noise);
PdmpPath simulate_path(const PdmpSpec& spec, double x0, double horizon, const Noise& noise);

// Continues the path to a later horizon with the same noise.
void extend_path(PdmpPath& path, double new_horizon);

// One step: E ~ Exp(rate), shock, then jump_map(flow(z, E), shock).
MarkovKernel embedded_kernel(const PdmpSpec& spec);

// Samples X_t given X_0 = state, by exact simulation up to t.
MarkovKernel time_sampler(const PdmpSpec& spec, double t);

// X_t from x without storing the skeleton; same draws as simulate_path.
double advance(const PdmpSpec& spec, double x, double t, Noise& noise);

// Semi-flow solving x' = g(x) by adaptive RK4 with step doubling. Throws
// ConfigError when the integrator cannot meet the tolerance.
PdmpSpec::Flow make_ode_flow(std::function<double(double)> g, double abs_tol = 1e-10);

struct SemiFlowCheck {
  bool holds = true;
  double worst_error = 0.0;
};

// Checks flow(x, 0) = x and flow(flow(x, s), t) = flow(x, s + t) within a
// relative tolerance on random (x, s, t), x in [x_lo, x_hi], s, t in
// [0, t_max].
SemiFlowCheck check_semi_flow(const PdmpSpec::Flow& flow, double x_lo, double x_hi, double t_max,
                              std::size_t trials, RandomStream rng, double rel_tol = 1e-9);

// Checks that flow(., t) and jump_map(., shock) preserve order on random
// ordered pairs. Returns false at the first violation.
bool check_monotone_flags(const PdmpSpec& spec, double x_lo, double x_hi, std::size_t trials,
                          const Noise& noise);

// `T_n,Z_n`.
void write_skeleton_csv(std::ostream& os, const PdmpPath& path);
// `t,X_t` at the given times.
void write_dense_csv(std::ostream& os, const PdmpPath& path, std::span<const double> grid);

}  // namespace mmm
