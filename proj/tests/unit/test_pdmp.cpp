#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "mmm/error.hpp"
#include "mmm/models/income.hpp"
#include "mmm/models/wage.hpp"
#include "mmm/pdmp/pdmp.hpp"
#include "mmm/prob/metrics.hpp"

using namespace mmm;

namespace {

PdmpSpec sawtooth_spec() {
  PdmpSpec s;
  s.flow = [](double x, double t) { return x + 0.05 * t; };
  s.rate = 0.15;
  s.shock_sampler = [](Noise&) { return Shock{0, 0.0}; };
  s.jump_map = [](double, const Shock&) { return 0.0; };
  s.flow_is_monotone = true;
  s.jump_is_monotone = true;
  s.name = "sawtooth";
  return s;
}

PdmpSpec constant_spec() {
  PdmpSpec s = sawtooth_spec();
  s.flow = [](double x, double) { return x; };
  s.jump_map = [](double x, const Shock&) { return x; };
  return s;
}

double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("constant process stays put") {
  const auto path = simulate_path(constant_spec(), 2.5, 500.0, Noise(1, 1));
  for (double z : path.states()) CHECK(z == 2.5);
  CHECK(path.state_at(123.4) == 2.5);
  CHECK(path.final_state() == 2.5);
}

TEST_CASE("sawtooth resets to zero and climbs at slope 0.05") {
  const auto path = simulate_path(sawtooth_spec(), 0.0, 1000.0, Noise(2, 0));
  const auto& t = path.jump_times();
  const auto& z = path.states();
  REQUIRE(path.jump_count() > 10);
  for (std::size_t n = 1; n < z.size(); ++n) CHECK(z[n] == 0.0);
  for (std::size_t n = 0; n + 1 < t.size(); ++n) {
    const double mid = 0.5 * (t[n] + t[n + 1]);
    CHECK(path.state_at(mid) == doctest::Approx(0.05 * (mid - t[n])).epsilon(1e-12));
  }
}

TEST_CASE("jump count is Poisson(rate * horizon)") {
  // 150 expected at rate 0.15 over 1000; check a single path within 3 sd and
  // the mean over 400 paths within 3 standard errors.
  const auto spec = sawtooth_spec();
  const auto one = simulate_path(spec, 0.0, 1000.0, Noise(8, 8));
  CHECK(std::abs(static_cast<double>(one.jump_count()) - 150.0) <= 3.0 * std::sqrt(150.0));
  double total = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    total += static_cast<double>(simulate_path(spec, 0.0, 1000.0, Noise(s, 3)).jump_count());
  }
  CHECK(std::abs(total / 400 - 150.0) <= 3.0 * std::sqrt(150.0 / 400));
}

TEST_CASE("paths are cadlag and defined only on [0, horizon]") {
  const auto spec = pure_jump_spec(pure_jump_default_config());
  const auto path = simulate_path(spec, 0.7, 200.0, Noise(4, 4));
  CHECK(path.state_at(0.0) == 0.7);
  const auto& t = path.jump_times();
  const auto& z = path.states();
  CHECK(path.shock_kinds().front() == -1);
  for (std::size_t n = 1; n < t.size(); ++n) {
    CHECK(path.state_at(t[n]) == z[n]);
    CHECK(path.state_at(std::nextafter(t[n], 0.0)) == z[n - 1]);
    CHECK(t[n] > t[n - 1]);
    CHECK(t[n] <= 200.0);
  }
  CHECK_THROWS_AS(path.state_at(-1e-9), RangeError);
  CHECK_THROWS_AS(path.state_at(200.0001), RangeError);
  CHECK_THROWS_AS(simulate_path(spec, 0.0, -1.0, Noise(1, 1)), InvalidArgument);
}

TEST_CASE("extending a path reproduces the longer simulation exactly") {
  const auto spec = std::make_shared<const PdmpSpec>(drift_income_spec(drift_income_default_config()));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Noise noise(s, 6);
    const double t = 10.0 + 7.0 * static_cast<double>(s);
    auto a = simulate_path(spec, 0.0, t, noise);
    extend_path(a, 2.0 * t);
    const auto b = simulate_path(spec, 0.0, 2.0 * t, noise);
    CHECK(a.jump_times() == b.jump_times());
    CHECK(a.states() == b.states());
    CHECK(a.final_state() == b.final_state());
  }
  auto p = simulate_path(spec, 0.0, 5.0, Noise(1, 1));
  CHECK_THROWS_AS(extend_path(p, 4.0), InvalidArgument);
}

TEST_CASE("advance matches the simulated final state") {
  const auto spec = wage_pdmp_spec(wage_default_config());
  for (std::uint64_t s = 0; s < 50; ++s) {
    Noise n(s, 2);
    const double a = advance(spec, 0.4, 13.0, n);
    CHECK(a == simulate_path(spec, 0.4, 13.0, Noise(s, 2)).final_state());
  }
  const auto id = time_sampler(spec, 0.0);
  Noise n(1, 1);
  CHECK(id(0.123, n) == 0.123);
}

TEST_CASE("embedded chain equals the jump skeleton") {
  const auto spec = drift_income_spec(drift_income_default_config());
  const Noise noise(31, 0);
  const auto path = simulate_path(spec, 0.0, 2000.0, noise);
  Noise n = noise;
  const auto chain = iterate(embedded_kernel(spec), 0.0, path.jump_count(), n);
  CHECK(chain == path.states());
}

TEST_CASE("pre-jump states of a pure-reset drift follow zeta + mu E") {
  // X_{T_{n+1}-} = zeta_n + mu E_{n+1} with zeta ~ N(0, s^2), E ~ Exp(lambda)
  // independent; its CDF is integrated numerically here.
  const auto cfg = drift_income_default_config();
  const auto path = simulate_path(drift_income_spec(cfg), 0.0, 40000.0, Noise(77, 1));
  const auto& t = path.jump_times();
  const auto& z = path.states();
  std::vector<double> pre;
  for (std::size_t n = 1; n + 1 < t.size(); ++n) pre.push_back(z[n] + cfg.mu * (t[n + 1] - t[n]));
  REQUIRE(pre.size() > 5000);

  const double mu = cfg.mu, lam = cfg.lambda, sd = cfg.reset_sd;
  const auto oracle = [=](double c) {
    // Midpoint rule in u = 1 - e^{-lambda e} on (0, 1).
    const int m = 4000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double u = (i + 0.5) / m;
      const double e = -std::log1p(-u) / lam;
      acc += phi_cdf((c - mu * e) / sd);
    }
    return acc / m;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const AnalyticCdf target(oracle, -inf, inf);
  const auto emp = build_empirical(pre);
  CHECK(kolmogorov_distance(emp, target) <= dkw_band(pre.size(), 0.999));
}

TEST_CASE("Chapman-Kolmogorov for the drift-income process") {
  // Start at 0 so that P_s and P_t carry no atom off the grid.
  const auto spec = drift_income_spec(drift_income_default_config());
  const std::size_t n = 10000;
  std::vector<double> direct(n), composed(n);
  const Noise a(1, 100), b(1, 200), c(1, 300);
  for (std::size_t i = 0; i < n; ++i) {
    Noise na = a.split(i), nb = b.split(i), nc = c.split(i);
    direct[i] = advance(spec, 0.0, 1.5, na);
    composed[i] = advance(spec, advance(spec, 0.0, 1.0, nb), 0.5, nc);
  }
  CHECK(bhattacharya_1d(build_empirical(direct), build_empirical(composed)) <=
        4.0 * dkw_band(n, 0.999));
}

TEST_CASE("ODE flows satisfy the semi-flow law") {
  const auto constant = make_ode_flow([](double) { return 0.05; });
  for (double x : {-3.0, 0.0, 2.5}) {
    for (double t : {0.0, 0.3, 4.0}) CHECK(constant(x, t) == doctest::Approx(x + 0.05 * t).epsilon(1e-10));
  }
  const auto logistic = make_ode_flow([](double x) { return x * (1.0 - x); });
  for (double x : {0.1, 0.5, 0.9}) {
    for (double t : {0.5, 2.0, 7.0}) {
      const double et = std::exp(t);
      CHECK(logistic(x, t) == doctest::Approx(x * et / (1.0 - x + x * et)).epsilon(1e-9));
    }
  }
  CHECK(check_semi_flow(logistic, 0.0, 1.0, 3.0, 200, RandomStream(1, 1)).holds);
  const PdmpSpec::Flow closed = [](double x, double t) { return x * std::exp(-t); };
  CHECK(check_semi_flow(closed, -5.0, 5.0, 3.0, 200, RandomStream(2, 2)).holds);
  const PdmpSpec::Flow broken = [](double x, double t) { return x + t * t; };
  CHECK_FALSE(check_semi_flow(broken, -5.0, 5.0, 3.0, 200, RandomStream(3, 3)).holds);
}

TEST_CASE("drift specs with an ODE drift") {
  auto cfg = drift_income_default_config();
  cfg.g = [](double x) { return 0.05 - 0.01 * x; };
  const auto spec = drift_income_spec(cfg);
  // Closed form: x* + (x - x*) e^{-0.01 t}, x* = 5.
  CHECK(spec.flow(1.0, 10.0) == doctest::Approx(5.0 - 4.0 * std::exp(-0.1)).epsilon(1e-9));
  // x' = x^2 blows up in finite time.
  cfg.g = [](double x) { return x * x; };
  CHECK_THROWS_AS(drift_income_spec(cfg), ConfigError);
}

TEST_CASE("shared-noise paths from ordered starts stay ordered") {
  const std::vector<PdmpSpec> specs = {drift_income_spec(drift_income_default_config()),
                                       pure_jump_spec(pure_jump_default_config()),
                                       wage_pdmp_spec(wage_default_config())};
  for (const auto& spec : specs) {
    REQUIRE(spec.monotone());
    const bool wage = spec.name.find("wage") != std::string::npos;
    const double lo = wage ? 0.1 : -1.0;
    const double hi = wage ? 0.9 : 1.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto a = simulate_path(spec, lo, 100.0, Noise(s, 9));
      const auto b = simulate_path(spec, hi, 100.0, Noise(s, 9));
      for (int i = 0; i <= 100; ++i) REQUIRE(a.state_at(i) <= b.state_at(i));
    }
    CHECK(check_monotone_flags(spec, lo, hi, 1000, Noise(5, 5)));
  }
}

TEST_CASE("spec validation") {
  PdmpSpec s = sawtooth_spec();
  s.rate = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = sawtooth_spec();
  s.flow = nullptr;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("skeleton and dense CSV formats") {
  const auto path = simulate_path(sawtooth_spec(), 0.0, 0.0, Noise(1, 1));
  std::ostringstream a;
  write_skeleton_csv(a, path);
  CHECK(a.str() == "T_n,Z_n\n0,0\n");
  std::ostringstream b;
  const double grid[] = {0.0};
  write_dense_csv(b, path, grid);
  CHECK(b.str() == "t,X_t\n0,0\n");
}
