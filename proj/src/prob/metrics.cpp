#include "mmm/prob/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmm/error.hpp"

namespace mmm {
namespace {

constexpr int kGridPoints = 4096;
constexpr int kRefineCandidates = 16;
constexpr int kRefineSubdivisions = 32;
constexpr double kRefineImprovement = 1e-10;

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  double at = 0.0;
  bool left = false;

  void offer(double v, double c, bool is_left) {
    if (v > value) {
      value = v;
      at = c;
      left = is_left;
    }
  }
};

// max_c sign * (F_phi(c) - F_psi(c)) for two closed-form CDFs.
Extremum sup_signed(const AnalyticCdf& phi, const AnalyticCdf& psi, double sign) {
  const auto [a1, b1] = phi.effective_support();
  const auto [a2, b2] = psi.effective_support();
  const double a = std::min(a1, a2);
  const double b = std::max(b1, b2);
  auto g = [&](double c) { return sign * (phi.cdf(c) - psi.cdf(c)); };

  Extremum best;
  std::vector<double> xs(kGridPoints);
  std::vector<double> gs(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    xs[i] = a + (b - a) * static_cast<double>(i) / (kGridPoints - 1);
    gs[i] = g(xs[i]);
    best.offer(gs[i], xs[i], false);
  }
  for (const auto* d : {&phi, &psi}) {
    for (const Atom& at : d->atoms()) {
      best.offer(g(at.location), at.location, false);
      best.offer(sign * (phi.cdf_left(at.location) - psi.cdf_left(at.location)), at.location,
                 true);
    }
  }

  std::vector<int> peaks;
  for (int i = 0; i < kGridPoints; ++i) {
    const bool up = i == 0 || gs[i] >= gs[i - 1];
    const bool down = i == kGridPoints - 1 || gs[i] >= gs[i + 1];
    if (up && down) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int l, int r) { return gs[l] > gs[r]; });
  if (peaks.size() > kRefineCandidates) peaks.resize(kRefineCandidates);

  for (int i : peaks) {
    double lo = xs[std::max(i - 1, 0)];
    double hi = xs[std::min(i + 1, kGridPoints - 1)];
    double current = gs[i];
    for (int iter = 0; iter < 200; ++iter) {
      double step = (hi - lo) / kRefineSubdivisions;
      if (!(step > 0.0)) break;
      int arg = 0;
      double val = -std::numeric_limits<double>::infinity();
      for (int k = 0; k <= kRefineSubdivisions; ++k) {
        const double c = lo + step * k;
        const double v = g(c);
        if (v > val) {
          val = v;
          arg = k;
        }
      }
      const double c_best = lo + step * arg;
      best.offer(val, c_best, false);
      const double gain = val - current;
      current = std::max(current, val);
      lo = std::max(lo, c_best - step);
      hi = std::min(hi, c_best + step);
      if (gain < kRefineImprovement && iter > 0) break;
    }
  }
  return best;
}

// Walks the merged jump points of two empirical CDFs, calling visit(c, Fa, Fb)
// with the right-continuous values at each distinct point.
template <typename Visit>
void merge_walk(const EmpiricalDistribution& a, const EmpiricalDistribution& b, Visit visit) {
  const auto& pa = a.points();
  const auto& pb = b.points();
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  while (i < pa.size() || j < pb.size()) {
    double c;
    if (j == pb.size() || (i < pa.size() && pa[i] <= pb[j])) {
      c = pa[i];
    } else {
      c = pb[j];
    }
    while (i < pa.size() && pa[i] == c) fa = a.cumulative(i++);
    while (j < pb.size() && pb[j] == c) fb = b.cumulative(j++);
    visit(c, fa, fb);
  }
}

// Calls visit(x, Fe(x-), Fe(x)) once per distinct sample point.
template <typename Visit>
void distinct_points(const EmpiricalDistribution& e, Visit visit) {
  const auto& p = e.points();
  std::size_t i = 0;
  double before = 0.0;
  while (i < p.size()) {
    const double x = p[i];
    double after = before;
    while (i < p.size() && p[i] == x) after = e.cumulative(i++);
    visit(x, before, after);
    before = after;
  }
}

}  // namespace

double kolmogorov_distance(const EmpiricalDistribution& phi, const EmpiricalDistribution& psi) {
  double best = 0.0;
  merge_walk(phi, psi, [&](double, double fa, double fb) { best = std::max(best, std::abs(fa - fb)); });
  return best;
}

double kolmogorov_distance(const EmpiricalDistribution& phi, const AnalyticCdf& psi) {
  double best = 0.0;
  distinct_points(phi, [&](double x, double left, double right) {
    best = std::max(best, std::abs(right - psi.cdf(x)));
    best = std::max(best, std::abs(left - psi.cdf_left(x)));
  });
  return best;
}

double kolmogorov_distance(const AnalyticCdf& phi, const EmpiricalDistribution& psi) {
  return kolmogorov_distance(psi, phi);
}

double kolmogorov_distance(const AnalyticCdf& phi, const AnalyticCdf& psi) {
  const double up = sup_signed(phi, psi, 1.0).value;
  const double down = sup_signed(phi, psi, -1.0).value;
  return std::clamp(std::max(up, down), 0.0, 1.0);
}

namespace {

DominanceResult finish_dominance(double gap, double at, bool left, double tol) {
  DominanceResult r;
  r.worst_gap = std::max(gap, 0.0);
  r.holds = !(gap > tol);
  if (!r.holds) {
    r.witness = at;
    r.witness_is_left_limit = left;
  }
  return r;
}

}  // namespace

DominanceResult dominates_sd(const EmpiricalDistribution& phi, const EmpiricalDistribution& psi,
                             double tol) {
  Extremum worst;
  worst.offer(0.0, phi.min(), false);
  merge_walk(phi, psi, [&](double c, double fa, double fb) { worst.offer(fb - fa, c, false); });
  return finish_dominance(worst.value, worst.at, worst.left, tol);
}

DominanceResult dominates_sd(const EmpiricalDistribution& phi, const AnalyticCdf& psi,
                             double tol) {
  Extremum worst;
  worst.offer(0.0, phi.min(), false);
  distinct_points(phi, [&](double x, double left, double right) {
    worst.offer(psi.cdf_left(x) - left, x, true);
    worst.offer(psi.cdf(x) - right, x, false);
  });
  return finish_dominance(worst.value, worst.at, worst.left, tol);
}

DominanceResult dominates_sd(const AnalyticCdf& phi, const EmpiricalDistribution& psi,
                             double tol) {
  Extremum worst;
  worst.offer(0.0, psi.min(), false);
  distinct_points(psi, [&](double x, double left, double right) {
    worst.offer(right - phi.cdf(x), x, false);
    worst.offer(left - phi.cdf_left(x), x, true);
  });
  return finish_dominance(worst.value, worst.at, worst.left, tol);
}

DominanceResult dominates_sd(const AnalyticCdf& phi, const AnalyticCdf& psi, double tol) {
  // Largest F_psi - F_phi.
  const Extremum e = sup_signed(phi, psi, -1.0);
  return finish_dominance(e.value, e.at, e.left, tol);
}

std::vector<TightnessInterval> tightness_profile(std::span<const EmpiricalDistribution> family,
                                                 std::span<const double> levels) {
  if (family.empty()) throw InvalidArgument("tightness_profile needs a nonempty family");
  std::vector<double> pooled;
  for (const auto& d : family) pooled.insert(pooled.end(), d.points().begin(), d.points().end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  std::vector<TightnessInterval> out;
  out.reserve(levels.size());
  for (double eps : levels) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("tightness level must lie in (0,1)");
    const double need = 1.0 - eps - 1e-12;
    auto feasible = [&](std::size_t a, std::size_t b) {
      for (const auto& d : family) {
        if (d.cdf(pooled[b]) - d.cdf_left(pooled[a]) < need) return false;
      }
      return true;
    };
    TightnessInterval best{eps, pooled.front(), pooled.back()};
    double best_len = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (std::size_t a = 0; a < pooled.size(); ++a) {
      j = std::max(j, a);
      while (j < pooled.size() && !feasible(a, j)) ++j;
      if (j == pooled.size()) break;
      const double len = pooled[j] - pooled[a];
      if (len < best_len) {
        best_len = len;
        best = {eps, pooled[a], pooled[j]};
      }
    }
    out.push_back(best);
  }
  return out;
}

double dkw_band(std::size_t n, double confidence) {
  if (n == 0) throw InvalidArgument("dkw_band needs n > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidArgument("confidence must lie in (0,1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
}

}  // namespace mmm
