#include "mmm/kernels/markov_kernel.hpp"

#include <cmath>
#include <ostream>

#include "mmm/error.hpp"
#include "mmm/kernels/parallel.hpp"
#include "mmm/prob/io.hpp"

namespace mmm {

MarkovKernel MarkovKernel::identity() {
  return {[](double x, Noise&) { return x; }, "identity", true, true};
}

MarkovKernel MarkovKernel::deterministic(std::function<double(double)> f, bool monotone,
                                         std::string name) {
  return {[f = std::move(f)](double x, Noise&) { return f(x); }, std::move(name), monotone, true};
}

namespace {

void check_finite(double x, std::size_t step) {
  if (!std::isfinite(x)) throw SimulationError("non-finite state", step);
}

void check_compatible(const MarkovKernel& ka, const MarkovKernel& kb, CouplingMode mode) {
  if (mode == CouplingMode::SharedClockIndependentShocks &&
      !(ka.event_driven && kb.event_driven)) {
    throw ConfigError("shared-clock coupling needs event-driven kernels");
  }
}

}  // namespace

std::vector<double> iterate(const MarkovKernel& k, double x0, std::size_t steps, Noise& noise) {
  check_finite(x0, 0);
  std::vector<double> path;
  path.reserve(steps + 1);
  path.push_back(x0);
  double x = x0;
  for (std::size_t i = 1; i <= steps; ++i) {
    x = k(x, noise);
    check_finite(x, i);
    path.push_back(x);
  }
  return path;
}

double iterate_final(const MarkovKernel& k, double x0, std::size_t steps, Noise& noise) {
  check_finite(x0, 0);
  double x = x0;
  for (std::size_t i = 1; i <= steps; ++i) {
    x = k(x, noise);
    check_finite(x, i);
  }
  return x;
}

EmpiricalDistribution push_forward(const MarkovKernel& k, const EmpiricalDistribution& phi,
                                   std::size_t t, const Noise& noise) {
  if (t == 0) return phi;
  std::vector<double> out(phi.size());
  parallel_for(phi.size(), [&](std::size_t i) {
    Noise local = noise.split(i);
    out[i] = iterate_final(k, phi.points()[i], t, local);
  });
  if (phi.uniform_weights()) return EmpiricalDistribution::from_samples(out);
  return EmpiricalDistribution::from_weighted(out, phi.weights());
}

const char* to_string(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::SharedNoise:
      return "shared";
    case CouplingMode::Independent:
      return "independent";
    case CouplingMode::SharedClockIndependentShocks:
      return "shared-clock";
  }
  return "?";
}

CouplingMode parse_coupling_mode(const std::string& s) {
  if (s == "shared") return CouplingMode::SharedNoise;
  if (s == "independent") return CouplingMode::Independent;
  if (s == "shared-clock") return CouplingMode::SharedClockIndependentShocks;
  throw ConfigError("unknown coupling mode: " + s);
}

std::pair<Noise, Noise> couple_noise(const Noise& base, CouplingMode mode) {
  switch (mode) {
    case CouplingMode::SharedNoise:
      return {base, base};
    case CouplingMode::Independent:
      return {base.split(0), base.split(1)};
    case CouplingMode::SharedClockIndependentShocks: {
      Noise a = base.split(0);
      Noise b = a;
      b.marks = base.split(1).marks;
      return {a, b};
    }
  }
  throw ConfigError("unknown coupling mode");
}

CoupledPaths coupled_paths(const MarkovKernel& ka, const MarkovKernel& kb, double xa, double xb,
                           CouplingMode mode, std::size_t steps, const Noise& noise) {
  check_compatible(ka, kb, mode);
  auto [na, nb] = couple_noise(noise, mode);
  return {iterate(ka, xa, steps, na), iterate(kb, xb, steps, nb)};
}

std::optional<std::size_t> order_reversal_time(const MarkovKernel& k, double x_hi, double x_lo,
                                               CouplingMode mode, std::size_t horizon,
                                               const Noise& noise) {
  if (horizon < 1) throw InvalidArgument("order_reversal_time needs horizon >= 1");
  if (!(x_lo <= x_hi)) throw InvalidArgument("order_reversal_time needs x_lo <= x_hi");
  check_compatible(k, k, mode);
  if (x_hi <= x_lo) return 0;
  auto [na, nb] = couple_noise(noise, mode);
  double a = x_hi;
  double b = x_lo;
  for (std::size_t i = 1; i <= horizon; ++i) {
    a = k(a, na);
    b = k(b, nb);
    check_finite(a, i);
    check_finite(b, i);
    if (a <= b) return i;
  }
  return std::nullopt;
}

void write_path_csv(std::ostream& os, const std::vector<double>& path) {
  os << "step,state\n";
  for (std::size_t i = 0; i < path.size(); ++i) os << i << ',' << format_double(path[i]) << '\n';
}

void write_coupled_csv(std::ostream& os, const CoupledPaths& paths) {
  if (paths.a.size() != paths.b.size()) throw InvalidArgument("coupled paths differ in length");
  os << "step,state_a,state_b\n";
  for (std::size_t i = 0; i < paths.a.size(); ++i) {
    os << i << ',' << format_double(paths.a[i]) << ',' << format_double(paths.b[i]) << '\n';
  }
}

}  // namespace mmm
