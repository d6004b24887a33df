#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hatch/policy.hpp"
#include "hatch/synthetic.hpp"

namespace hatch {

enum class EnvironmentKind { kSynthetic, kReplayLog };

std::string to_string(EnvironmentKind kind);
EnvironmentKind environment_kind_from_string(const std::string& name);

// One reproducible experiment: an environment, a policy, a budget ratio
// rho = B/T, and a replica count. All randomness fans out from `seed`.
struct ExperimentConfig {
  EnvironmentKind environment{EnvironmentKind::kSynthetic};
  std::string log_path;       // replay environments
  std::string clusters_path;  // replay environments
  PolicyConfig policy;
  double rho{0.25};
  std::int64_t horizon{10000};
  int replicas{1};
  std::uint64_t seed{0};
  std::string output_dir;
  SyntheticConfig synthetic;
};

void validate(const ExperimentConfig& config);
std::int64_t total_budget(const ExperimentConfig& config);  // floor(rho * horizon)

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_json_text(const std::string& text);
std::string experiment_config_to_json_text(const ExperimentConfig& config);

// Replica seed derivation, recorded in the manifest.
std::uint64_t replica_seed(const ExperimentConfig& config, int replica);

// Per-round mean and sample standard deviation across replicas.
struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

struct RunMetrics {
  ExperimentConfig config;
  std::int64_t budget{0};
  int n_classes{0};
  std::vector<std::uint64_t> replica_seeds;

  // Cumulative series. Regret series exist for synthetic runs only:
  // `regret` charges the optimal-minus-chosen gap on executed rounds,
  // `regret_full` additionally charges the full optimal reward on skipped
  // rounds.
  SeriesStats regret;
  SeriesStats regret_full;
  SeriesStats cum_reward;
  SeriesStats ctr;
  SeriesStats budget_remaining;

  // Per-class aggregates pooled over replicas.
  Eigen::VectorXd class_arrivals;
  Eigen::VectorXd class_executed;
  Eigen::VectorXd allocation_rate;    // executed / arrivals
  Eigen::VectorXd occupancy_rate;     // executed / total executed
  Eigen::VectorXd class_mean_reward;  // reward / executed

  double mean_executed_total{0.0};
  double duration_seconds{0.0};
  bool any_exhausted{false};
  std::int64_t min_rounds_completed{0};
};

// Runs all replicas (in parallel, isolated seeds) and aggregates.
RunMetrics run_experiment(const ExperimentConfig& config);

// CSV artifacts plus the run manifest, all byte-deterministic for a given
// metrics value: regret_curve.csv (synthetic only), ctr_curve.csv,
// allocation_by_class.csv, budget_trace.csv, manifest.json.
void emit_reports(const RunMetrics& metrics, const std::filesystem::path& output_dir);

// Stored-metrics round trip backing the `report` command.
void save_metrics(const std::filesystem::path& path, const RunMetrics& metrics);
RunMetrics load_metrics(const std::filesystem::path& path);

}  // namespace hatch
