#pragma once

#include <filesystem>
#include <memory>

#include "hatch/policy.hpp"

namespace hatch {

// Versioned full-state policy snapshots. State round-trips exactly: the
// estimator matrices, counters, budget, config, and the random-generator
// state are all preserved, so a restored policy continues the identical
// decision stream for identical future inputs.
void save_policy(const std::filesystem::path& path, const Policy& policy);
std::unique_ptr<Policy> load_policy(const std::filesystem::path& path);

}  // namespace hatch
