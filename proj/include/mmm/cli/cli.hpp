#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadConfig = 2;        // usage or configuration error
inline constexpr int kSimulationError = 3;  // non-finite state, model error
inline constexpr int kInsufficientData = 4; // too few tail observations
inline constexpr int kMonotoneFailure = 5;  // shared-noise order violated
inline constexpr int kCheckFailure = 6;     // a statistical check failed

// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmm::cli
