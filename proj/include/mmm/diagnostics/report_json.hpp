#pragma once

#include <json.hpp>

#include "mmm/diagnostics/diagnostics.hpp"

namespace mmm {

nlohmann::ordered_json to_json(const ConvergenceReport& r);
nlohmann::ordered_json to_json(const TailEstimate& t);
nlohmann::ordered_json to_json(const MmcEstimate& e);
nlohmann::ordered_json to_json(const MixingReport& m);

}  // namespace mmm
