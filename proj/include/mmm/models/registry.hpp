#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmm/kernels/markov_kernel.hpp"
#include "mmm/models/wage.hpp"
#include "mmm/pdmp/pdmp.hpp"
#include "mmm/prob/analytic_cdf.hpp"

namespace mmm {

// Flat parameter set of one model kind, in schema order. What a config file
// section holds.
struct ModelDescription {
  std::string kind;
  std::vector<std::pair<std::string, double>> params;

  // Throws ConfigError for a key not in the list.
  double get(const std::string& key) const;
  void set(const std::string& key, double value);

  friend bool operator==(const ModelDescription&, const ModelDescription&) = default;
};

// Model kinds accepted as config sections.
const std::vector<std::string>& model_kinds();
// Named parameter sets, including the kinds themselves.
const std::vector<std::string>& preset_names();
// Throws ConfigError for an unknown name.
ModelDescription preset(const std::string& name);

// Format:
//   # comment
//   [kind]
//   key = value
// Exactly one section. Missing keys take the kind's defaults; unknown
// sections or keys, duplicates and unparsable values are ConfigErrors.
ModelDescription parse_config(std::istream& is);
ModelDescription parse_config_file(const std::string& path);
// Every key, values printed with 17 significant digits.
std::string serialize_config(const ModelDescription& d);

// A ready model: kernels, optional PDMP structure and reference quantities.
struct Model {
  ModelDescription description;
  std::string name;
  bool continuous_time = true;
  // One event of the embedded chain, or one period for discrete models.
  MarkovKernel event_kernel;
  // Samples X_t given X_0. Discrete models round t to whole periods.
  std::function<MarkovKernel(double t)> transition;
  std::optional<PdmpSpec> pdmp;
  // Closed-form stationary law when known.
  std::optional<AnalyticCdf> stationary;
  // Pareto index of the stationary tail of tail_transform(X).
  std::optional<double> tail_exponent;
  // Turns a state into the quantity whose tail is studied (income e^X).
  std::function<double(double)> tail_transform;
  // State space bounds for compact models.
  std::optional<std::pair<double, double>> compact;
  // Typical low and high starting states.
  double start_low = 0.0;
  double start_high = 1.0;
  // Order-reversal overlay parameters: survival <= (1 - reversal_rate)^n at
  // the n-th shared event under reversal_mode.
  std::optional<double> reversal_rate;
  CouplingMode reversal_mode = CouplingMode::SharedClockIndependentShocks;
  // Wage model only.
  std::optional<WageLadderConfig> wage;
  std::optional<MmcConstants> mmc;
  // Time between recorded states of a stationary long run.
  double long_run_spacing = 1.0;
  // Post-jump states are stationary draws themselves (identity flow with a
  // constant rate), so long runs can use the embedded chain.
  bool embedded_is_stationary = false;
};

Model build_model(const ModelDescription& d);

// Stationary-surrogate samples from one long run: burn_in recorded states are
// dropped, then n are kept. Jump chains with stationary post-jump states are
// recorded once per event; other PDMPs on a time grid (exact between jumps)
// with the given spacing (0 = the model default); discrete models once per
// period.
std::vector<double> long_run_samples(const Model& m, std::size_t n, std::size_t burn_in,
                                     const Noise& noise, double spacing = 0.0,
                                     std::optional<double> x0 = std::nullopt);

}  // namespace mmm
