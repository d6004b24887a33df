#include "hatch/replay.hpp"

#include <stdexcept>
#include <utility>

#include "hatch/rng.hpp"

namespace hatch {

namespace {

enum : std::uint64_t { kClassStream = 1, kMatchStream = 2 };

}  // namespace

EvaluationReport replay_evaluate(const EventLog& log, const ClusterModel& model,
                                 const Eigen::VectorXd& phi, Policy& policy,
                                 std::int64_t rounds, std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("replay_evaluate: rounds must be >= 1");
  if (log.dim != model.dim() || log.dim != policy.context_dim())
    throw std::invalid_argument("replay_evaluate: context dimension mismatch");
  if (log.n_arms != policy.n_arms())
    throw std::invalid_argument("replay_evaluate: arm count mismatch");
  const int n_classes = model.n_classes();
  if (phi.size() != n_classes || (phi.array() <= 0.0).any() ||
      std::abs(phi.sum() - 1.0) > 1e-6)
    throw std::invalid_argument("replay_evaluate: phi is not a distribution over classes");

  // Bucket event indices by assigned class.
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < log.events.size(); ++i)
    buckets[static_cast<std::size_t>(assign_class(model, log.events[i].x))].push_back(i);

  const Rng root(seed);
  Rng class_rng = root.fork(kClassStream);  // isolated: class draws stay i.i.d. phi
  Rng match_rng = root.fork(kMatchStream);

  EvaluationReport report;
  report.rounds_requested = rounds;
  report.ctr_curve.reserve(static_cast<std::size_t>(rounds));
  report.reward_curve.reserve(static_cast<std::size_t>(rounds));
  report.budget_curve.reserve(static_cast<std::size_t>(rounds));
  report.class_rounds = Eigen::VectorXd::Zero(n_classes);
  report.class_executed = Eigen::VectorXd::Zero(n_classes);
  report.class_reward = Eigen::VectorXd::Zero(n_classes);

  double total_reward = 0.0;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    const int cls = class_rng.categorical(phi);
    std::vector<std::size_t>& bucket = buckets[static_cast<std::size_t>(cls)];

    // Probe candidates in uniformly random order until the policy's
    // recommended arm matches the logged arm; tested non-matches stay in the
    // bucket for later rounds.
    std::size_t untested = bucket.size();
    std::size_t matched = bucket.size();
    while (untested > 0) {
      const std::size_t pick =
          static_cast<std::size_t>(match_rng.uniform_int(static_cast<std::int64_t>(untested)));
      const Event& candidate = log.events[bucket[pick]];
      if (policy.choose_arm(candidate.x, cls) == candidate.arm) {
        matched = pick;
        break;
      }
      std::swap(bucket[pick], bucket[untested - 1]);
      --untested;
      report.events_rejected += 1;
    }
    if (matched == bucket.size()) {
      report.exhausted = true;  // nothing in this class can match anymore
      break;
    }

    const Event event = log.events[bucket[matched]];
    bucket[matched] = bucket.back();
    bucket.pop_back();
    report.events_consumed += 1;
    report.class_rounds[cls] += 1.0;

    const Decision decision = policy.decide(event.x, cls);
    if (decision.executed) {
      total_reward += event.reward;
      report.class_executed[cls] += 1.0;
      report.class_reward[cls] += event.reward;
      policy.feedback(decision, event.x, event.reward);
    } else {
      policy.skip(decision);  // consumed event scores zero without a display
    }
    report.rounds_completed = t;
    report.reward_curve.push_back(total_reward);
    report.ctr_curve.push_back(total_reward / static_cast<double>(t));
    report.budget_curve.push_back(static_cast<double>(policy.budget().remaining_budget));
  }

  report.final_ctr = report.rounds_completed > 0
                         ? total_reward / static_cast<double>(report.rounds_completed)
                         : 0.0;
  report.allocation_rate = Eigen::VectorXd::Zero(n_classes);
  report.occupancy_rate = Eigen::VectorXd::Zero(n_classes);
  const double executed_total = report.class_executed.sum();
  for (int j = 0; j < n_classes; ++j) {
    if (report.class_rounds[j] > 0.0)
      report.allocation_rate[j] = report.class_executed[j] / report.class_rounds[j];
    if (executed_total > 0.0)
      report.occupancy_rate[j] = report.class_executed[j] / executed_total;
  }
  return report;
}

}  // namespace hatch
