#include "hatch/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "hatch/clustering.hpp"
#include "hatch/errors.hpp"
#include "hatch/replay.hpp"
#include "hatch/rng.hpp"
#include "hatch/stats.hpp"
#include "json_util.hpp"

namespace hatch {

using nlohmann::json;
using detail::vector_from_json;
using detail::vector_to_json;

namespace {

constexpr const char* kToolVersion = "hatch 1.0.0";
constexpr int kMetricsVersion = 1;

// Stream ids under each replica seed.
enum : std::uint64_t {
  kWorldStream = 1,
  kPolicyStream = 2,
  kClassStream = 3,
  kContextStream = 4,
  kRewardStream = 5,
  kReplayStream = 6,
};

}  // namespace

std::string to_string(EnvironmentKind kind) {
  return kind == EnvironmentKind::kSynthetic ? "synthetic" : "replay_log";
}

EnvironmentKind environment_kind_from_string(const std::string& name) {
  if (name == "synthetic") return EnvironmentKind::kSynthetic;
  if (name == "replay_log") return EnvironmentKind::kReplayLog;
  throw std::invalid_argument("unknown environment: " + name);
}

void validate(const ExperimentConfig& config) {
  validate(config.policy);
  if (!(config.rho >= 0.0) || !std::isfinite(config.rho))
    throw std::invalid_argument("experiment config: rho must be >= 0");
  if (config.horizon < 1)
    throw std::invalid_argument("experiment config: horizon must be >= 1");
  if (config.replicas < 1)
    throw std::invalid_argument("experiment config: replicas must be >= 1");
  if (config.environment == EnvironmentKind::kReplayLog) {
    if (config.log_path.empty() || config.clusters_path.empty())
      throw std::invalid_argument(
          "experiment config: replay_log requires log_path and clusters_path");
  } else {
    validate(config.synthetic);
  }
}

std::int64_t total_budget(const ExperimentConfig& config) {
  return static_cast<std::int64_t>(
      std::floor(config.rho * static_cast<double>(config.horizon)));
}

std::uint64_t replica_seed(const ExperimentConfig& config, int replica) {
  return Rng::mix(config.seed ^ Rng::mix(static_cast<std::uint64_t>(replica) + 0x5eedULL));
}

// ---------------------------------------------------------------------------
// Config json
// ---------------------------------------------------------------------------

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const char* where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) ok = true;
    if (!ok)
      throw std::invalid_argument(std::string(where) + ": unknown field '" + item.key() + "'");
  }
}

PolicyConfig policy_config_from_json(const json& j) {
  reject_unknown_keys(
      j, {"policy_kind", "lambda", "delta", "alpha_override", "alpha_tilde_mode", "seed"},
      "policy config");
  PolicyConfig config;
  config.policy_kind = policy_kind_from_string(j.at("policy_kind").get<std::string>());
  if (j.contains("lambda")) config.lambda = j.at("lambda").get<double>();
  if (j.contains("delta")) config.delta = j.at("delta").get<double>();
  if (j.contains("alpha_override") && !j.at("alpha_override").is_null())
    config.alpha_override = j.at("alpha_override").get<double>();
  if (j.contains("alpha_tilde_mode"))
    config.alpha_tilde_mode =
        alpha_tilde_mode_from_string(j.at("alpha_tilde_mode").get<std::string>());
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

json policy_config_to_json(const PolicyConfig& config) {
  json j;
  j["policy_kind"] = to_string(config.policy_kind);
  j["lambda"] = config.lambda;
  j["delta"] = config.delta;
  j["alpha_override"] = config.alpha_override ? json(*config.alpha_override) : json(nullptr);
  j["alpha_tilde_mode"] = to_string(config.alpha_tilde_mode);
  j["seed"] = config.seed;
  return j;
}

SyntheticConfig synthetic_config_from_json(const json& j) {
  reject_unknown_keys(j, {"dim", "n_classes", "n_arms", "phi", "n_contexts", "seed"},
                      "synthetic config");
  SyntheticConfig config;
  if (j.contains("dim")) config.dim = j.at("dim").get<int>();
  if (j.contains("n_classes")) config.n_classes = j.at("n_classes").get<int>();
  if (j.contains("n_arms")) config.n_arms = j.at("n_arms").get<int>();
  if (j.contains("phi")) config.phi = vector_from_json(j.at("phi"));
  if (j.contains("n_contexts")) config.n_contexts = j.at("n_contexts").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

json synthetic_config_to_json(const SyntheticConfig& config) {
  json j;
  j["dim"] = config.dim;
  j["n_classes"] = config.n_classes;
  j["n_arms"] = config.n_arms;
  if (config.phi.size() > 0) j["phi"] = vector_to_json(config.phi);
  j["n_contexts"] = config.n_contexts;
  j["seed"] = config.seed;
  return j;
}

json experiment_config_to_json(const ExperimentConfig& config) {
  json j;
  j["environment"] = to_string(config.environment);
  if (config.environment == EnvironmentKind::kReplayLog) {
    j["log_path"] = config.log_path;
    j["clusters_path"] = config.clusters_path;
  } else {
    j["synthetic"] = synthetic_config_to_json(config.synthetic);
  }
  j["policy"] = policy_config_to_json(config.policy);
  j["rho"] = config.rho;
  j["horizon"] = config.horizon;
  j["replicas"] = config.replicas;
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"environment", "log_path", "clusters_path", "policy", "rho", "horizon",
                       "replicas", "seed", "output_dir", "synthetic"},
                      "experiment config");
  ExperimentConfig config;
  config.environment = environment_kind_from_string(j.at("environment").get<std::string>());
  if (j.contains("log_path")) config.log_path = j.at("log_path").get<std::string>();
  if (j.contains("clusters_path"))
    config.clusters_path = j.at("clusters_path").get<std::string>();
  config.policy = policy_config_from_json(j.at("policy"));
  config.rho = j.at("rho").get<double>();
  config.horizon = j.at("horizon").get<std::int64_t>();
  if (j.contains("replicas")) config.replicas = j.at("replicas").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("synthetic"))
    config.synthetic = synthetic_config_from_json(j.at("synthetic"));
  validate(config);
  return config;
}

}  // namespace

ExperimentConfig experiment_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument("experiment config: invalid json: " + std::string(e.what()));
  }
  try {
    return experiment_config_from_json(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument("experiment config: " + std::string(e.what()));
  }
}

std::string experiment_config_to_json_text(const ExperimentConfig& config) {
  return experiment_config_to_json(config).dump(2);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read experiment config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return experiment_config_from_json_text(text.str());
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

namespace {

struct ReplicaResult {
  std::vector<double> regret;
  std::vector<double> regret_full;
  std::vector<double> cum_reward;
  std::vector<double> ctr;
  std::vector<double> budget_remaining;
  Eigen::VectorXd class_arrivals;
  Eigen::VectorXd class_executed;
  Eigen::VectorXd class_reward;
  std::int64_t executed_total{0};
  std::int64_t rounds_completed{0};
  bool exhausted{false};
};

ReplicaResult run_synthetic_replica(const ExperimentConfig& config, std::uint64_t seed) {
  const Rng root(seed);
  SyntheticConfig world_config = config.synthetic;
  world_config.seed = root.fork(kWorldStream).seed();
  const SyntheticWorld world = generate_synthetic(world_config);

  PolicyConfig policy_config = config.policy;
  policy_config.seed = root.fork(kPolicyStream).seed();
  PolicySetup setup;
  setup.dim = world.config.dim;
  setup.n_arms = world.config.n_arms;
  setup.total_budget = total_budget(config);
  setup.horizon = config.horizon;
  setup.profiles = class_profiles(world);
  auto policy = make_policy(policy_config, setup);

  Rng class_rng = root.fork(kClassStream);
  Rng context_rng = root.fork(kContextStream);
  Rng reward_rng = root.fork(kRewardStream);

  const std::size_t n = static_cast<std::size_t>(config.horizon);
  ReplicaResult result;
  result.regret.reserve(n);
  result.regret_full.reserve(n);
  result.cum_reward.reserve(n);
  result.ctr.reserve(n);
  result.budget_remaining.reserve(n);
  result.class_arrivals = Eigen::VectorXd::Zero(world.config.n_classes);
  result.class_executed = Eigen::VectorXd::Zero(world.config.n_classes);
  result.class_reward = Eigen::VectorXd::Zero(world.config.n_classes);

  double regret = 0.0, regret_full = 0.0, reward_sum = 0.0;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const int cls = sample_class(world, class_rng);
    const Eigen::VectorXd x = sample_context(world, context_rng, cls);
    result.class_arrivals[cls] += 1.0;

    const Decision decision = policy->decide(x, cls);
    const double optimal = optimal_expected_reward(world, cls, x);
    if (decision.executed) {
      const double reward = draw_reward(world, reward_rng, cls, decision.arm, x);
      policy->feedback(decision, x, reward);
      const double gap = optimal - expected_reward(world, cls, decision.arm, x);
      regret += gap;
      regret_full += gap;
      reward_sum += reward;
      result.class_executed[cls] += 1.0;
      result.class_reward[cls] += reward;
      result.executed_total += 1;
    } else {
      policy->skip(decision);
      regret_full += optimal;
    }
    result.regret.push_back(regret);
    result.regret_full.push_back(regret_full);
    result.cum_reward.push_back(reward_sum);
    result.ctr.push_back(reward_sum / static_cast<double>(t));
    result.budget_remaining.push_back(
        static_cast<double>(policy->budget().remaining_budget));
  }
  result.rounds_completed = config.horizon;
  return result;
}

ReplicaResult run_replay_replica(const ExperimentConfig& config, const EventLog& log,
                                 const ClusterModel& model, std::uint64_t seed) {
  const Rng root(seed);
  PolicyConfig policy_config = config.policy;
  policy_config.seed = root.fork(kPolicyStream).seed();

  PolicySetup setup;
  setup.dim = log.dim;
  setup.n_arms = log.n_arms;
  setup.total_budget = total_budget(config);
  setup.horizon = config.horizon;
  setup.profiles = class_profiles(model);
  auto policy = make_policy(policy_config, setup);

  Eigen::VectorXd phi(static_cast<Eigen::Index>(setup.profiles.size()));
  for (std::size_t j = 0; j < setup.profiles.size(); ++j)
    phi[static_cast<Eigen::Index>(j)] = setup.profiles[j].phi;

  const EvaluationReport report = replay_evaluate(log, model, phi, *policy, config.horizon,
                                                  root.fork(kReplayStream).seed());

  ReplicaResult result;
  result.cum_reward = report.reward_curve;
  result.ctr = report.ctr_curve;
  result.budget_remaining = report.budget_curve;
  result.class_arrivals = report.class_rounds;
  result.class_executed = report.class_executed;
  result.class_reward = report.class_reward;
  result.executed_total = static_cast<std::int64_t>(report.class_executed.sum());
  result.rounds_completed = report.rounds_completed;
  result.exhausted = report.exhausted;
  return result;
}

SeriesStats aggregate_series(const std::vector<ReplicaResult>& results,
                             std::vector<double> ReplicaResult::*series,
                             std::size_t length) {
  SeriesStats stats;
  stats.mean.resize(length);
  stats.stddev.resize(length);
  std::vector<double> values(results.size());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t r = 0; r < results.size(); ++r) values[r] = (results[r].*series)[t];
    stats.mean[t] = mean(values);
    stats.stddev[t] = sample_stddev(values);
  }
  return stats;
}

}  // namespace

RunMetrics run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  // Replay inputs load once and are shared read-only across replicas.
  EventLog log;
  ClusterModel cluster_model;
  if (config.environment == EnvironmentKind::kReplayLog) {
    log = read_event_log(config.log_path);
    cluster_model = load_cluster_model(config.clusters_path);
    if (log.dim != cluster_model.dim())
      throw std::invalid_argument("run_experiment: log/cluster dimension mismatch");
  }

  std::vector<std::uint64_t> seeds;
  seeds.reserve(static_cast<std::size_t>(config.replicas));
  for (int r = 0; r < config.replicas; ++r) seeds.push_back(replica_seed(config, r));

  std::vector<ReplicaResult> results(static_cast<std::size_t>(config.replicas));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int r = next.fetch_add(1); r < config.replicas; r = next.fetch_add(1)) {
      if (failed.load()) return;
      try {
        results[static_cast<std::size_t>(r)] =
            config.environment == EnvironmentKind::kSynthetic
                ? run_synthetic_replica(config, seeds[static_cast<std::size_t>(r)])
                : run_replay_replica(config, log, cluster_model,
                                     seeds[static_cast<std::size_t>(r)]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> guard(failure_mutex);
        failed.store(true);
        if (failure.empty()) failure = e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_threads = static_cast<int>(
      std::min<unsigned>(hw, static_cast<unsigned>(config.replicas)));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (failed.load()) throw std::runtime_error("replica failed: " + failure);

  RunMetrics metrics;
  metrics.config = config;
  metrics.budget = total_budget(config);
  metrics.replica_seeds = seeds;
  metrics.n_classes = static_cast<int>(results.front().class_arrivals.size());

  std::size_t min_len = results.front().cum_reward.size();
  for (const ReplicaResult& r : results) {
    min_len = std::min(min_len, r.cum_reward.size());
    metrics.any_exhausted = metrics.any_exhausted || r.exhausted;
  }
  metrics.min_rounds_completed = static_cast<std::int64_t>(min_len);

  if (config.environment == EnvironmentKind::kSynthetic) {
    metrics.regret = aggregate_series(results, &ReplicaResult::regret, min_len);
    metrics.regret_full = aggregate_series(results, &ReplicaResult::regret_full, min_len);
  }
  metrics.cum_reward = aggregate_series(results, &ReplicaResult::cum_reward, min_len);
  metrics.ctr = aggregate_series(results, &ReplicaResult::ctr, min_len);
  metrics.budget_remaining =
      aggregate_series(results, &ReplicaResult::budget_remaining, min_len);

  // Per-class aggregates are pooled over replicas.
  Eigen::VectorXd arrivals = Eigen::VectorXd::Zero(metrics.n_classes);
  Eigen::VectorXd executed = Eigen::VectorXd::Zero(metrics.n_classes);
  Eigen::VectorXd reward = Eigen::VectorXd::Zero(metrics.n_classes);
  double executed_total = 0.0;
  for (const ReplicaResult& r : results) {
    arrivals += r.class_arrivals;
    executed += r.class_executed;
    reward += r.class_reward;
    executed_total += static_cast<double>(r.executed_total);
  }
  metrics.class_arrivals = arrivals;
  metrics.class_executed = executed;
  metrics.allocation_rate = Eigen::VectorXd::Zero(metrics.n_classes);
  metrics.occupancy_rate = Eigen::VectorXd::Zero(metrics.n_classes);
  metrics.class_mean_reward = Eigen::VectorXd::Zero(metrics.n_classes);
  for (int j = 0; j < metrics.n_classes; ++j) {
    if (arrivals[j] > 0.0) metrics.allocation_rate[j] = executed[j] / arrivals[j];
    if (executed_total > 0.0) metrics.occupancy_rate[j] = executed[j] / executed_total;
    if (executed[j] > 0.0) metrics.class_mean_reward[j] = reward[j] / executed[j];
  }
  metrics.mean_executed_total = executed_total / static_cast<double>(config.replicas);
  metrics.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return metrics;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write report: " + path.string());
  return out;
}

void write_curve(const std::filesystem::path& path, const SeriesStats& series) {
  std::ofstream out = open_csv(path);
  out << "round,mean,std\n";
  for (std::size_t t = 0; t < series.mean.size(); ++t)
    out << (t + 1) << ',' << fmt(series.mean[t]) << ',' << fmt(series.stddev[t]) << '\n';
  if (!out) throw io_error("failed writing report: " + path.string());
}

}  // namespace

void emit_reports(const RunMetrics& metrics, const std::filesystem::path& output_dir) {
  if (metrics.replica_seeds.empty())
    throw std::invalid_argument("emit_reports: metrics hold no replicas");
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw io_error("cannot create output directory: " + output_dir.string());

  if (metrics.config.environment == EnvironmentKind::kSynthetic) {
    std::ofstream out = open_csv(output_dir / "regret_curve.csv");
    out << "round,mean,std,full_mean,full_std\n";
    for (std::size_t t = 0; t < metrics.regret.mean.size(); ++t)
      out << (t + 1) << ',' << fmt(metrics.regret.mean[t]) << ','
          << fmt(metrics.regret.stddev[t]) << ',' << fmt(metrics.regret_full.mean[t]) << ','
          << fmt(metrics.regret_full.stddev[t]) << '\n';
    if (!out) throw io_error("failed writing regret_curve.csv");
  }
  write_curve(output_dir / "ctr_curve.csv", metrics.ctr);
  write_curve(output_dir / "budget_trace.csv", metrics.budget_remaining);

  {
    std::ofstream out = open_csv(output_dir / "allocation_by_class.csv");
    out << "class,allocation_rate,occupancy_rate,mean_reward,arrivals,executed\n";
    for (int j = 0; j < metrics.n_classes; ++j)
      out << j << ',' << fmt(metrics.allocation_rate[j]) << ','
          << fmt(metrics.occupancy_rate[j]) << ',' << fmt(metrics.class_mean_reward[j]) << ','
          << fmt(metrics.class_arrivals[j]) << ',' << fmt(metrics.class_executed[j]) << '\n';
    if (!out) throw io_error("failed writing allocation_by_class.csv");
  }

  json manifest;
  manifest["format"] = "hatch-run-manifest";
  manifest["version"] = kToolVersion;
  manifest["config"] = json::parse(experiment_config_to_json_text(metrics.config));
  manifest["total_budget"] = metrics.budget;
  manifest["replica_seeds"] = metrics.replica_seeds;
  manifest["rounds_completed"] = metrics.min_rounds_completed;
  manifest["exhausted"] = metrics.any_exhausted;
  std::ofstream out(output_dir / "manifest.json");
  if (!out) throw io_error("cannot write manifest.json");
  out << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Metrics persistence
// ---------------------------------------------------------------------------

namespace {

json series_to_json(const SeriesStats& s) {
  return json{{"mean", s.mean}, {"stddev", s.stddev}};
}

SeriesStats series_from_json(const json& j) {
  SeriesStats s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
  if (s.mean.size() != s.stddev.size()) throw format_error("metrics: ragged series");
  return s;
}

}  // namespace

void save_metrics(const std::filesystem::path& path, const RunMetrics& metrics) {
  json j;
  j["format"] = "hatch-run-metrics";
  j["version"] = kMetricsVersion;
  j["config"] = json::parse(experiment_config_to_json_text(metrics.config));
  j["budget"] = metrics.budget;
  j["n_classes"] = metrics.n_classes;
  j["replica_seeds"] = metrics.replica_seeds;
  if (metrics.config.environment == EnvironmentKind::kSynthetic) {
    j["regret"] = series_to_json(metrics.regret);
    j["regret_full"] = series_to_json(metrics.regret_full);
  }
  j["cum_reward"] = series_to_json(metrics.cum_reward);
  j["ctr"] = series_to_json(metrics.ctr);
  j["budget_remaining"] = series_to_json(metrics.budget_remaining);
  j["class_arrivals"] = vector_to_json(metrics.class_arrivals);
  j["class_executed"] = vector_to_json(metrics.class_executed);
  j["allocation_rate"] = vector_to_json(metrics.allocation_rate);
  j["occupancy_rate"] = vector_to_json(metrics.occupancy_rate);
  j["class_mean_reward"] = vector_to_json(metrics.class_mean_reward);
  j["mean_executed_total"] = metrics.mean_executed_total;
  j["duration_seconds"] = metrics.duration_seconds;
  j["any_exhausted"] = metrics.any_exhausted;
  j["min_rounds_completed"] = metrics.min_rounds_completed;
  std::ofstream out(path);
  if (!out) throw io_error("cannot write metrics: " + path.string());
  out << j.dump(2) << '\n';
}

RunMetrics load_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read metrics: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw format_error("metrics: invalid json: " + std::string(e.what()));
  }
  try {
    if (j.at("format") != "hatch-run-metrics") throw format_error("metrics: wrong format tag");
    if (j.at("version") != kMetricsVersion) throw format_error("metrics: unsupported version");
    RunMetrics metrics;
    metrics.config = experiment_config_from_json_text(j.at("config").dump());
    metrics.budget = j.at("budget").get<std::int64_t>();
    metrics.n_classes = j.at("n_classes").get<int>();
    metrics.replica_seeds = j.at("replica_seeds").get<std::vector<std::uint64_t>>();
    if (metrics.config.environment == EnvironmentKind::kSynthetic) {
      metrics.regret = series_from_json(j.at("regret"));
      metrics.regret_full = series_from_json(j.at("regret_full"));
    }
    metrics.cum_reward = series_from_json(j.at("cum_reward"));
    metrics.ctr = series_from_json(j.at("ctr"));
    metrics.budget_remaining = series_from_json(j.at("budget_remaining"));
    metrics.class_arrivals = vector_from_json(j.at("class_arrivals"));
    metrics.class_executed = vector_from_json(j.at("class_executed"));
    metrics.allocation_rate = vector_from_json(j.at("allocation_rate"));
    metrics.occupancy_rate = vector_from_json(j.at("occupancy_rate"));
    metrics.class_mean_reward = vector_from_json(j.at("class_mean_reward"));
    metrics.mean_executed_total = j.at("mean_executed_total").get<double>();
    metrics.duration_seconds = j.at("duration_seconds").get<double>();
    metrics.any_exhausted = j.at("any_exhausted").get<bool>();
    metrics.min_rounds_completed = j.at("min_rounds_completed").get<std::int64_t>();
    return metrics;
  } catch (const json::exception& e) {
    throw format_error("metrics: missing field: " + std::string(e.what()));
  }
}

}  // namespace hatch
