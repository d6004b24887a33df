#pragma once

// Shared helpers for the unit suites and the acceptance binary.

#include <bit>
#include <cstdint>

#include <Eigen/Core>

#include "hatch/allocation.hpp"
#include "hatch/policy.hpp"
#include "hatch/rng.hpp"

namespace hatch_test {

// Fixed nonadaptive reference policy: the arm is a salted hash of the context
// bits, so it is deterministic per context (as replay matching requires) and
// marginally uniform over arms for random contexts. Learns nothing; executes
// while budget remains.
class HashArmPolicy final : public hatch::Policy {
 public:
  HashArmPolicy(int dim, int n_arms, std::int64_t budget, std::int64_t horizon,
                std::uint64_t salt)
      : dim_(dim), n_arms_(n_arms), budget_(hatch::make_budget(budget, horizon)),
        salt_(salt) {}

  hatch::PolicyKind kind() const override {
    return hatch::PolicyKind::kGreedyLinUcb;  // nominal; snapshots are not used here
  }
  int context_dim() const override { return dim_; }
  int n_arms() const override { return n_arms_; }
  const hatch::BudgetState& budget() const override { return budget_; }

  int choose_arm(const Eigen::VectorXd& x, int /*class_id*/,
                 Eigen::VectorXd* scores = nullptr) const override {
    std::uint64_t h = salt_;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      h = hatch::Rng::mix(h ^ std::bit_cast<std::uint64_t>(x[i]));
    const int arm = static_cast<int>(h % static_cast<std::uint64_t>(n_arms_));
    if (scores) {
      *scores = Eigen::VectorXd::Zero(n_arms_);
      (*scores)[arm] = 1.0;
    }
    return arm;
  }

  hatch::Decision decide(const Eigen::VectorXd& x, int class_id) override {
    hatch::Decision d;
    d.class_id = class_id;
    d.arm = choose_arm(x, class_id, &d.scores);
    if (budget_.remaining_budget > 0) {
      d.retain_prob = 1.0;
      d.executed = true;
    }
    return d;
  }

  void feedback(const hatch::Decision&, const Eigen::VectorXd&, double) override {
    hatch::step_budget(budget_, true);
  }

  void skip(const hatch::Decision&) override { hatch::step_budget(budget_, false); }

 private:
  int dim_;
  int n_arms_;
  hatch::BudgetState budget_;
  std::uint64_t salt_;
};

}  // namespace hatch_test
