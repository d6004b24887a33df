#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hatch/clustering.hpp"
#include "hatch/replay.hpp"
#include "hatch/rng.hpp"
#include "hatch/synthetic.hpp"
#include "test_support.hpp"

using hatch::ClusterModel;
using hatch::EvaluationReport;
using hatch::Event;
using hatch::EventLog;
using hatch::replay_evaluate;
using hatch::Rng;
using hatch_test::HashArmPolicy;

namespace {

// One class, one arm: every event is matchable by any policy.
EventLog single_arm_log(int n, Rng& rng) {
  EventLog log;
  log.dim = 2;
  log.n_arms = 1;
  for (int i = 0; i < n; ++i) {
    Event e;
    e.t = i + 1;
    e.x = Eigen::Vector2d(rng.uniform01() * 0.7, rng.uniform01() * 0.7);
    e.arm = 0;
    e.reward = rng.bernoulli(0.3) ? 1.0 : 0.0;
    log.events.push_back(std::move(e));
  }
  return log;
}

ClusterModel single_class_model() {
  Eigen::MatrixXd centers(2, 1);
  centers.col(0) = Eigen::Vector2d(0.35, 0.35);
  return hatch::cluster_model_from_centers(centers,
                                           (Eigen::VectorXd(1) << 1.0).finished());
}

// Empirical bucket frequencies of a log under a model; the phi an evaluator
// should sample with to mirror the log's context marginal.
Eigen::VectorXd bucket_phi(const EventLog& log, const ClusterModel& model) {
  Eigen::VectorXd counts = Eigen::VectorXd::Constant(model.n_classes(), 1e-9);
  for (const Event& e : log.events) counts[hatch::assign_class(model, e.x)] += 1.0;
  return counts / counts.sum();
}

}  // namespace

TEST_CASE("single-arm log accepts every event and reproduces the mean reward") {
  Rng rng(3);
  const EventLog log = single_arm_log(500, rng);
  double mean_reward = 0.0;
  for (const Event& e : log.events) mean_reward += e.reward;
  mean_reward /= 500.0;

  const ClusterModel model = single_class_model();
  HashArmPolicy policy(2, 1, 500, 500, 1);
  const EvaluationReport report =
      replay_evaluate(log, model, model.phi, policy, 500, 11);
  CHECK(report.rounds_completed == 500);
  CHECK_FALSE(report.exhausted);
  CHECK(report.events_rejected == 0);
  CHECK(report.events_consumed == 500);
  CHECK(report.final_ctr == doctest::Approx(mean_reward).epsilon(1e-12));
}

TEST_CASE("requesting more rounds than events flags exhaustion") {
  Rng rng(4);
  const EventLog log = single_arm_log(100, rng);
  const ClusterModel model = single_class_model();
  HashArmPolicy policy(2, 1, 200, 200, 1);
  const EvaluationReport report =
      replay_evaluate(log, model, model.phi, policy, 200, 11);
  CHECK(report.exhausted);
  CHECK(report.rounds_completed == 100);
  CHECK(report.events_consumed == 100);
}

TEST_CASE("uniform logging is matched at roughly one per arm count") {
  hatch::SyntheticConfig config;
  config.dim = 4;
  config.n_classes = 3;
  config.n_arms = 5;
  config.phi = (Eigen::VectorXd(3) << 0.3, 0.3, 0.4).finished();
  config.n_contexts = 4000;
  config.seed = 5;
  const hatch::SyntheticWorld world = hatch::generate_synthetic(config);
  const EventLog log = hatch::make_uniform_log(world, 20000, 6);
  const ClusterModel model =
      hatch::cluster_model_from_centers(world.class_centers, world.config.phi);

  HashArmPolicy policy(4, 5, 1000, 1000, 2);
  const EvaluationReport report =
      replay_evaluate(log, model, bucket_phi(log, model), policy, 1000, 7);
  REQUIRE(report.rounds_completed == 1000);
  const double acceptance =
      static_cast<double>(report.events_consumed) /
      static_cast<double>(report.events_consumed + report.events_rejected);
  CHECK(acceptance == doctest::Approx(0.2).epsilon(0.15));
}

TEST_CASE("sampled classes follow phi independently of the policy") {
  Rng rng(8);
  hatch::SyntheticConfig config;
  config.dim = 3;
  config.n_classes = 3;
  config.n_arms = 2;
  config.phi = (Eigen::VectorXd(3) << 0.2, 0.3, 0.5).finished();
  config.n_contexts = 3000;
  config.seed = 9;
  const hatch::SyntheticWorld world = hatch::generate_synthetic(config);
  const EventLog log = hatch::make_uniform_log(world, 30000, 10);
  const ClusterModel model =
      hatch::cluster_model_from_centers(world.class_centers, world.config.phi);
  const Eigen::VectorXd phi = bucket_phi(log, model);

  // Two policies with very different acceptance behavior see the same draws.
  HashArmPolicy executes(3, 2, 5000, 5000, 3);
  HashArmPolicy skips(3, 2, 0, 5000, 3);
  const EvaluationReport ra = replay_evaluate(log, model, phi, executes, 5000, 21);
  const EvaluationReport rb = replay_evaluate(log, model, phi, skips, 5000, 21);
  REQUIRE(ra.rounds_completed == 5000);
  CHECK(ra.class_rounds == rb.class_rounds);
  for (int j = 0; j < 3; ++j)
    CHECK(ra.class_rounds[j] / 5000.0 == doctest::Approx(phi[j]).epsilon(0.12));
}

TEST_CASE("skipped rounds still consume events and score zero") {
  Rng rng(12);
  const EventLog log = single_arm_log(300, rng);
  const ClusterModel model = single_class_model();
  HashArmPolicy policy(2, 1, 0, 300, 1);  // zero budget: skips forever
  const EvaluationReport report =
      replay_evaluate(log, model, model.phi, policy, 300, 13);
  CHECK(report.rounds_completed == 300);
  CHECK(report.events_consumed == 300);
  CHECK(report.final_ctr == 0.0);
  CHECK(report.class_executed.sum() == 0.0);
  CHECK(report.occupancy_rate.sum() == 0.0);
}

TEST_CASE("identical seeds reproduce the replay exactly") {
  Rng rng(14);
  const EventLog log = single_arm_log(400, rng);
  const ClusterModel model = single_class_model();
  HashArmPolicy a(2, 1, 100, 400, 1), b(2, 1, 100, 400, 1);
  const EvaluationReport ra = replay_evaluate(log, model, model.phi, a, 400, 15);
  const EvaluationReport rb = replay_evaluate(log, model, model.phi, b, 400, 15);
  CHECK(ra.final_ctr == rb.final_ctr);
  CHECK(ra.events_rejected == rb.events_rejected);
  CHECK(ra.ctr_curve == rb.ctr_curve);
}

TEST_CASE("replay matches direct simulation for a fixed policy") {
  hatch::SyntheticConfig config;
  config.dim = 4;
  config.n_classes = 4;
  config.n_arms = 4;
  config.phi = (Eigen::VectorXd(4) << 0.25, 0.25, 0.25, 0.25).finished();
  config.n_contexts = 5000;
  config.seed = 31;
  const hatch::SyntheticWorld world = hatch::generate_synthetic(config);
  const EventLog log = hatch::make_uniform_log(world, 40000, 32);
  const ClusterModel model =
      hatch::cluster_model_from_centers(world.class_centers, world.config.phi);

  const std::int64_t rounds = 3000;
  HashArmPolicy replay_policy(4, 4, rounds, rounds, 5);
  const EvaluationReport report = replay_evaluate(
      log, model, bucket_phi(log, model), replay_policy, rounds, 33);
  REQUIRE(report.rounds_completed == rounds);

  HashArmPolicy direct_policy(4, 4, rounds, rounds, 5);
  Rng sim_rng(34);
  double direct_sum = 0.0;
  for (std::int64_t t = 0; t < rounds; ++t) {
    const int cls = hatch::sample_class(world, sim_rng);
    const Eigen::VectorXd x = hatch::sample_context(world, sim_rng, cls);
    const int arm = direct_policy.choose_arm(x, cls);
    direct_sum += hatch::draw_reward(world, sim_rng, cls, arm, x);
  }
  const double direct_ctr = direct_sum / static_cast<double>(rounds);
  CHECK(report.final_ctr == doctest::Approx(direct_ctr).epsilon(0.08));
}
