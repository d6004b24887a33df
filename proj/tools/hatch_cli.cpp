// Command-line front end: generate synthetic worlds and logs, fit context
// clusters, run experiments, replay-evaluate a policy offline, and re-emit
// CSV reports from stored metrics.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 I/O error,
// 4 replay terminated early because a class bucket ran out of events.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hatch/clustering.hpp"
#include "hatch/errors.hpp"
#include "hatch/events.hpp"
#include "hatch/experiment.hpp"
#include "hatch/replay.hpp"
#include "hatch/rng.hpp"
#include "hatch/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitIoError = 3;
constexpr int kExitExhausted = 4;

hatch::SyntheticConfig load_synthetic_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hatch::io_error("cannot read config: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  // Reuse the experiment parser's synthetic block by wrapping the file.
  const std::string wrapped = std::string("{\"environment\":\"synthetic\",")
                              + "\"policy\":{\"policy_kind\":\"hatch\"},"
                              + "\"rho\":0,\"horizon\":1,\"synthetic\":" + text.str() + "}";
  return hatch::experiment_config_from_json_text(wrapped).synthetic;
}

int cmd_generate(const std::string& config_path, const std::string& out_log,
                 const std::string& out_clusters, std::int64_t n_events) {
  hatch::SyntheticConfig config =
      config_path.empty() ? hatch::SyntheticConfig{} : load_synthetic_config(config_path);
  const hatch::SyntheticWorld world = hatch::generate_synthetic(config);
  if (n_events <= 0) n_events = config.n_contexts;

  if (!out_log.empty()) {
    const hatch::EventLog log =
        hatch::make_uniform_log(world, n_events, hatch::Rng(config.seed).fork(101).seed());
    hatch::write_event_log(out_log, log);
    std::cout << "wrote " << log.events.size() << " events to " << out_log << "\n";
  }
  if (!out_clusters.empty()) {
    const hatch::ClusterModel model =
        hatch::cluster_model_from_centers(world.class_centers, world.config.phi);
    hatch::save_cluster_model(out_clusters, model);
    std::cout << "wrote cluster model (" << model.n_classes() << " classes) to "
              << out_clusters << "\n";
  }
  return kExitOk;
}

int cmd_cluster(const std::string& log_path, int n_classes, const std::string& method_name,
                std::uint64_t seed, double fit_fraction, const std::string& out_path) {
  if (!(fit_fraction > 0.0 && fit_fraction <= 1.0))
    throw std::invalid_argument("fit fraction must lie in (0,1]");
  const hatch::EventLog log = hatch::read_event_log(log_path);
  const auto n_fit = static_cast<std::size_t>(
      static_cast<double>(log.events.size()) * fit_fraction);
  if (n_fit == 0) throw std::invalid_argument("fit fraction selects no events");
  Eigen::MatrixXd points(log.dim, static_cast<Eigen::Index>(n_fit));
  for (std::size_t i = 0; i < n_fit; ++i)
    points.col(static_cast<Eigen::Index>(i)) = log.events[i].x;
  const hatch::ClusterModel model = hatch::fit_clusters(
      points, n_classes, hatch::cluster_method_from_string(method_name), seed);
  hatch::save_cluster_model(out_path, model);
  std::cout << "fitted " << method_name << " with " << n_classes << " classes on " << n_fit
            << " contexts; wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path) {
  const hatch::ExperimentConfig config = hatch::load_experiment_config(config_path);
  if (config.output_dir.empty())
    throw std::invalid_argument("experiment config: output_dir is required for run");
  const hatch::RunMetrics metrics = hatch::run_experiment(config);
  hatch::emit_reports(metrics, config.output_dir);
  hatch::save_metrics(std::filesystem::path(config.output_dir) / "metrics.json", metrics);
  std::cout << "completed " << config.replicas << " replica(s), "
            << metrics.min_rounds_completed << " round(s); mean executed "
            << metrics.mean_executed_total << "; reports in " << config.output_dir << "\n";
  if (metrics.any_exhausted) {
    std::cerr << "warning: replay exhausted an event bucket before the horizon\n";
    return kExitExhausted;
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& config_path, const std::string& log_override,
                 const std::string& clusters_override, const std::string& out_dir) {
  hatch::ExperimentConfig config = hatch::load_experiment_config(config_path);
  if (!log_override.empty()) config.log_path = log_override;
  if (!clusters_override.empty()) config.clusters_path = clusters_override;
  if (config.environment != hatch::EnvironmentKind::kReplayLog)
    throw std::invalid_argument("evaluate requires environment = replay_log");
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (config.output_dir.empty())
    throw std::invalid_argument("evaluate: output directory required");
  hatch::validate(config);

  const hatch::EventLog log = hatch::read_event_log(config.log_path);
  const hatch::ClusterModel model = hatch::load_cluster_model(config.clusters_path);

  hatch::PolicySetup setup;
  setup.dim = log.dim;
  setup.n_arms = log.n_arms;
  setup.total_budget = hatch::total_budget(config);
  setup.horizon = config.horizon;
  setup.profiles = hatch::class_profiles(model);
  auto policy = hatch::make_policy(config.policy, setup);

  Eigen::VectorXd phi(static_cast<Eigen::Index>(setup.profiles.size()));
  for (std::size_t j = 0; j < setup.profiles.size(); ++j)
    phi[static_cast<Eigen::Index>(j)] = setup.profiles[j].phi;

  const hatch::EvaluationReport report =
      hatch::replay_evaluate(log, model, phi, *policy, config.horizon, config.seed);

  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path dir(config.output_dir);
  {
    std::ofstream out(dir / "ctr_curve.csv");
    if (!out) throw hatch::io_error("cannot write ctr_curve.csv");
    out << "round,ctr,cum_reward,remaining_budget\n";
    for (std::size_t t = 0; t < report.ctr_curve.size(); ++t)
      out << (t + 1) << ',' << report.ctr_curve[t] << ',' << report.reward_curve[t] << ','
          << report.budget_curve[t] << '\n';
  }
  {
    std::ofstream out(dir / "allocation_by_class.csv");
    if (!out) throw hatch::io_error("cannot write allocation_by_class.csv");
    out << "class,allocation_rate,occupancy_rate,mean_reward,arrivals,executed\n";
    for (int j = 0; j < model.n_classes(); ++j) {
      const double executed = report.class_executed[j];
      const double mean_reward = executed > 0.0 ? report.class_reward[j] / executed : 0.0;
      out << j << ',' << report.allocation_rate[j] << ',' << report.occupancy_rate[j] << ','
          << mean_reward << ',' << report.class_rounds[j] << ',' << executed << '\n';
    }
  }
  std::cout << "replay: " << report.rounds_completed << "/" << report.rounds_requested
            << " rounds, final CTR " << report.final_ctr << ", consumed "
            << report.events_consumed << ", rejected " << report.events_rejected << "\n";
  if (report.exhausted) {
    std::cerr << "warning: event bucket exhausted before requested rounds\n";
    return kExitExhausted;
  }
  return kExitOk;
}

int cmd_report(const std::string& metrics_path, const std::string& out_dir) {
  const hatch::RunMetrics metrics = hatch::load_metrics(metrics_path);
  hatch::emit_reports(metrics, out_dir);
  std::cout << "reports written to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"budget-constrained contextual bandit toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_log, out_clusters, log_path, clusters_path, out_dir;
  std::string method_name = "gaussian_mixture";
  std::string metrics_path;
  std::int64_t n_events = 0;
  int n_classes = 10;
  std::uint64_t seed = 0;
  double fit_fraction = 0.5;

  CLI::App* generate = app.add_subcommand("generate", "generate a synthetic world and log");
  generate->add_option("--config", config_path, "synthetic config json");
  generate->add_option("--out-log", out_log, "event log output path");
  generate->add_option("--out-clusters", out_clusters,
                       "class-center cluster model output path");
  generate->add_option("--events", n_events, "number of logged events (default n_contexts)");

  CLI::App* cluster = app.add_subcommand("cluster", "fit a cluster model from a log");
  cluster->add_option("--log", log_path, "event log path")->required();
  cluster->add_option("--classes", n_classes, "number of classes");
  cluster->add_option("--method", method_name, "gaussian_mixture or kmeans");
  cluster->add_option("--seed", seed, "fit seed");
  cluster->add_option("--fit-fraction", fit_fraction,
                      "leading fraction of the log used for fitting");
  cluster->add_option("--out", out_dir, "cluster model output path")->required();

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("--config", config_path, "experiment config json")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "offline replay of one policy");
  evaluate->add_option("--config", config_path, "experiment config json (replay_log)")
      ->required();
  evaluate->add_option("--log", log_path, "override log path");
  evaluate->add_option("--clusters", clusters_path, "override cluster model path");
  evaluate->add_option("--out", out_dir, "output directory override");

  CLI::App* report = app.add_subcommand("report", "emit CSV reports from stored metrics");
  report->add_option("--metrics", metrics_path, "metrics.json path")->required();
  report->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_log, out_clusters, n_events);
    if (cluster->parsed())
      return cmd_cluster(log_path, n_classes, method_name, seed, fit_fraction, out_dir);
    if (run->parsed()) return cmd_run(config_path);
    if (evaluate->parsed())
      return cmd_evaluate(config_path, log_path, clusters_path, out_dir);
    if (report->parsed()) return cmd_report(metrics_path, out_dir);
  } catch (const hatch::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const hatch::format_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInvalidConfig;
}
