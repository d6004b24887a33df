#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace hatch {

// One logged interaction: context, displayed arm, observed binary reward,
// and optionally the class the context was generated from.
struct Event {
  std::int64_t t{0};
  Eigen::VectorXd x;
  int arm{0};
  double reward{0.0};
  std::optional<int> class_id{};
};

struct EventLog {
  int dim{0};
  int n_arms{0};
  std::vector<Event> events;
};

// Plain-text line format. First line declares dimensions:
//
//   hatch-events v1 dim=<d> arms=<K>
//   <t> <x_0> ... <x_{d-1}> <arm> <reward> [<class_id>]
//
// Rewards must be 0 or 1 and arms must lie in [0, K). If any context norm
// exceeds 1, ingestion rescales every context by the largest norm in the log
// and warns on stderr, keeping the norm-bounded contract downstream.
EventLog read_event_log(const std::filesystem::path& path);
void write_event_log(const std::filesystem::path& path, const EventLog& log);

}  // namespace hatch
