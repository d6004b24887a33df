#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hatch/clustering.hpp"
#include "hatch/events.hpp"
#include "hatch/policy.hpp"

namespace hatch {

// Outcome of one offline replay pass.
struct EvaluationReport {
  std::int64_t rounds_requested{0};
  std::int64_t rounds_completed{0};
  bool exhausted{false};  // a sampled class ran out of matchable events

  std::vector<double> ctr_curve;      // cumulative reward / round
  std::vector<double> reward_curve;   // cumulative reward
  std::vector<double> budget_curve;   // remaining budget per round
  double final_ctr{0.0};

  Eigen::VectorXd class_rounds;     // sampled-class counts (the phi draws)
  Eigen::VectorXd class_executed;   // executed rounds per class
  Eigen::VectorXd class_reward;     // reward collected per class
  Eigen::VectorXd allocation_rate;  // executed / sampled, per class
  Eigen::VectorXd occupancy_rate;   // executed / total executed, per class

  std::int64_t events_consumed{0};
  std::int64_t events_rejected{0};
};

// Offline evaluation against a static class distribution. Events are
// bucketed by the cluster model's class assignment; each round draws a class
// from phi (independently of everything the policy does), then samples
// events from that bucket until one's logged arm equals the policy's
// recommendation for that event's context. The matched event is consumed:
// if the policy executes, its logged reward is collected and fed back,
// otherwise the round scores zero and only time passes.
//
// If a sampled class has no matchable event left, the pass ends early with
// `exhausted` set and the achieved round count in `rounds_completed`.
EvaluationReport replay_evaluate(const EventLog& log, const ClusterModel& model,
                                 const Eigen::VectorXd& phi, Policy& policy,
                                 std::int64_t rounds, std::uint64_t seed);

}  // namespace hatch
