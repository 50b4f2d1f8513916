#include "mmm/diagnostics/report_json.hpp"

namespace mmm {

using nlohmann::ordered_json;

ordered_json to_json(const ConvergenceReport& r) {
  ordered_json j;
  j["target"] = r.target_name;
  j["n_paths"] = r.n_paths;
  j["mc_band"] = r.mc_band;
  j["confidence"] = r.confidence;
  j["already_converged"] = r.already_converged;
  j["fit_points"] = r.fit_points;
  j["fitted_rate"] = r.fitted_rate ? ordered_json(*r.fitted_rate) : ordered_json(nullptr);
  j["fitted_prefactor"] =
      r.fitted_prefactor ? ordered_json(*r.fitted_prefactor) : ordered_json(nullptr);
  ordered_json cps = ordered_json::array();
  for (const auto& cp : r.checkpoints) {
    ordered_json c;
    c["t"] = cp.t;
    c["beta_hat"] = cp.beta_hat;
    c["bound"] = cp.bound ? ordered_json(*cp.bound) : ordered_json(nullptr);
    cps.push_back(c);
  }
  j["checkpoints"] = cps;
  return j;
}

ordered_json to_json(const TailEstimate& t) {
  return {{"alpha_hat", t.alpha}, {"k", t.k},         {"n", t.n},
          {"ci_lo", t.ci_lo},     {"ci_hi", t.ci_hi}, {"ci_level", t.ci_level},
          {"threshold", t.threshold}, {"max", t.max}};
}

ordered_json to_json(const MmcEstimate& e) {
  return {{"p_up", e.p_up},
          {"p_down", e.p_down},
          {"lower_up", e.low_up},
          {"lower_down", e.low_down},
          {"epsilon_lower", e.epsilon_low},
          {"confidence", e.confidence},
          {"n_trials", e.n_trials},
          {"certified", e.certified()}};
}

ordered_json to_json(const MixingReport& m) {
  ordered_json j;
  j["mode"] = m.mode;
  j["replications"] = m.replications;
  j["survival"] = m.survival;
  j["std_error"] = m.std_error;
  if (!m.bound.empty()) j["bound"] = m.bound;
  return j;
}

}  // namespace mmm
