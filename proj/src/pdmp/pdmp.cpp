#include "mmm/pdmp/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mmm/error.hpp"
#include "mmm/prob/io.hpp"

namespace mmm {

void PdmpSpec::validate() const {
  if (!flow || !shock_sampler || !jump_map) {
    throw InvalidArgument("PDMP spec needs flow, shock sampler and jump map");
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("jump rate must be positive");
}

double PdmpPath::state_at(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw RangeError("time outside the simulated horizon");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t n = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double elapsed = t - times_[n];
  return elapsed == 0.0 ? states_[n] : spec_->flow(states_[n], elapsed);
}

namespace {

// Runs jumps while the pending jump time is within the horizon.
void run_to(const PdmpSpec& spec, double horizon, Noise& noise, double& t_last, double& z,
            double& next, std::size_t& jumps, std::vector<double>* times,
            std::vector<double>* states, std::vector<int>* kinds) {
  while (next <= horizon) {
    const Shock s = spec.shock_sampler(noise);
    const double pre = spec.flow(z, next - t_last);
    z = spec.jump_map(pre, s);
    ++jumps;
    if (!std::isfinite(z)) throw SimulationError("non-finite state", jumps);
    t_last = next;
    if (times) {
      times->push_back(t_last);
      states->push_back(z);
      kinds->push_back(s.kind);
    }
    next = t_last + noise.clock.exponential(spec.rate);
  }
}

}  // namespace

PdmpPath simulate_path(std::shared_ptr<const PdmpSpec> spec, double x0, double horizon,
                       const Noise& noise) {
  spec->validate();
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon must be finite and nonnegative");
  }
  if (!std::isfinite(x0)) throw SimulationError("non-finite state", 0);
  PdmpPath p;
  p.spec_ = std::move(spec);
  p.noise_ = noise;
  p.times_ = {0.0};
  p.states_ = {x0};
  p.kinds_ = {-1};
  p.next_jump_ = p.noise_.clock.exponential(p.spec_->rate);
  p.horizon_ = 0.0;
  extend_path(p, horizon);
  return p;
}

PdmpPath simulate_path(const PdmpSpec& spec, double x0, double horizon, const Noise& noise) {
  return simulate_path(std::make_shared<const PdmpSpec>(spec), x0, horizon, noise);
}

void extend_path(PdmpPath& path, double new_horizon) {
  if (!(new_horizon >= path.horizon_) || !std::isfinite(new_horizon)) {
    throw InvalidArgument("new horizon must be finite and not below the current one");
  }
  double t_last = path.times_.back();
  double z = path.states_.back();
  std::size_t jumps = path.jump_count();
  run_to(*path.spec_, new_horizon, path.noise_, t_last, z, path.next_jump_, jumps, &path.times_,
         &path.states_, &path.kinds_);
  path.horizon_ = new_horizon;
}

double advance(const PdmpSpec& spec, double x, double t, Noise& noise) {
  if (t == 0.0) return x;
  double t_last = 0.0;
  double z = x;
  double next = noise.clock.exponential(spec.rate);
  std::size_t jumps = 0;
  run_to(spec, t, noise, t_last, z, next, jumps, nullptr, nullptr, nullptr);
  const double elapsed = t - t_last;
  return elapsed == 0.0 ? z : spec.flow(z, elapsed);
}

MarkovKernel embedded_kernel(const PdmpSpec& spec) {
  spec.validate();
  MarkovKernel k;
  k.step = [spec](double z, Noise& noise) {
    const double e = noise.clock.exponential(spec.rate);
    const Shock s = spec.shock_sampler(noise);
    return spec.jump_map(spec.flow(z, e), s);
  };
  k.name = spec.name.empty() ? "embedded" : spec.name + "-embedded";
  k.monotone_by_construction = spec.monotone();
  k.event_driven = true;
  return k;
}

MarkovKernel time_sampler(const PdmpSpec& spec, double t) {
  spec.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
  MarkovKernel k;
  k.step = [spec, t](double x, Noise& noise) { return advance(spec, x, t, noise); };
  k.name = spec.name.empty() ? "time-sampler" : spec.name + "-time-sampler";
  k.monotone_by_construction = spec.monotone();
  k.event_driven = true;
  return k;
}

namespace {

double rk4_step(const std::function<double(double)>& g, double x, double h) {
  const double k1 = g(x);
  const double k2 = g(x + 0.5 * h * k1);
  const double k3 = g(x + 0.5 * h * k2);
  const double k4 = g(x + h * k3);
  return x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

}  // namespace

PdmpSpec::Flow make_ode_flow(std::function<double(double)> g, double abs_tol) {
  if (!g) throw InvalidArgument("ODE flow needs a drift function");
  if (!(abs_tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  return [g = std::move(g), abs_tol](double x, double t) {
    if (t == 0.0) return x;
    if (t < 0.0) throw InvalidArgument("flow time must be nonnegative");
    double done = 0.0;
    double h = std::min(t, 0.1);
    int steps = 0;
    while (done < t) {
      if (++steps > 10'000'000) throw ConfigError("ODE flow: too many steps");
      h = std::min(h, t - done);
      const double full = rk4_step(g, x, h);
      const double half = rk4_step(g, rk4_step(g, x, 0.5 * h), 0.5 * h);
      const double err = std::abs(half - full) / 15.0;
      if (!std::isfinite(half)) throw ConfigError("ODE flow: non-finite state");
      if (err <= abs_tol || h < 1e-12 * std::max(1.0, t)) {
        if (err > abs_tol) throw ConfigError("ODE flow: step size underflow");
        x = half + (half - full) / 15.0;
        done += h;
        const double grow = err > 0.0 ? 0.9 * std::pow(abs_tol / err, 0.2) : 4.0;
        h *= std::clamp(grow, 0.2, 4.0);
      } else {
        h *= std::clamp(0.9 * std::pow(abs_tol / err, 0.2), 0.1, 0.5);
      }
    }
    return x;
  };
}

SemiFlowCheck check_semi_flow(const PdmpSpec::Flow& flow, double x_lo, double x_hi, double t_max,
                              std::size_t trials, RandomStream rng, double rel_tol) {
  SemiFlowCheck out;
  for (std::size_t i = 0; i < trials; ++i) {
    const double x = x_lo + (x_hi - x_lo) * rng.uniform();
    const double s = t_max * rng.uniform();
    const double t = t_max * rng.uniform();
    double err0 = std::abs(flow(x, 0.0) - x) / std::max(1.0, std::abs(x));
    const double whole = flow(x, s + t);
    const double glued = flow(flow(x, s), t);
    double err = std::abs(whole - glued) / std::max(1.0, std::abs(whole));
    if (!std::isfinite(whole) || !std::isfinite(glued)) err = INFINITY;
    out.worst_error = std::max({out.worst_error, err, err0});
  }
  out.holds = out.worst_error <= rel_tol;
  return out;
}

bool check_monotone_flags(const PdmpSpec& spec, double x_lo, double x_hi, std::size_t trials,
                          const Noise& noise) {
  Noise n = noise;
  for (std::size_t i = 0; i < trials; ++i) {
    double a = x_lo + (x_hi - x_lo) * n.marks.uniform();
    double b = x_lo + (x_hi - x_lo) * n.marks.uniform();
    if (b < a) std::swap(a, b);
    const double t = n.marks.exponential(spec.rate);
    if (spec.flow_is_monotone && spec.flow(a, t) > spec.flow(b, t)) return false;
    const Shock s = spec.shock_sampler(n);
    if (spec.jump_is_monotone && spec.jump_map(a, s) > spec.jump_map(b, s)) return false;
  }
  return true;
}

void write_skeleton_csv(std::ostream& os, const PdmpPath& path) {
  os << "T_n,Z_n\n";
  for (std::size_t i = 0; i < path.jump_times().size(); ++i) {
    os << format_double(path.jump_times()[i]) << ',' << format_double(path.states()[i]) << '\n';
  }
}

void write_dense_csv(std::ostream& os, const PdmpPath& path, std::span<const double> grid) {
  os << "t,X_t\n";
  for (double t : grid) os << format_double(t) << ',' << format_double(path.state_at(t)) << '\n';
}

}  // namespace mmm
