#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hatch/allocation.hpp"
#include "hatch/ridge.hpp"
#include "hatch/rng.hpp"

namespace hatch {

enum class PolicyKind { kHatch, kGreedyLinUcb, kRandomLinUcb, kClusterUcbAlp };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

std::string to_string(AlphaTildeMode mode);
AlphaTildeMode alpha_tilde_mode_from_string(const std::string& name);

struct PolicyConfig {
  PolicyKind policy_kind{PolicyKind::kHatch};
  double lambda{1.0};
  double delta{0.1};
  // When set, the exploration bonus is alpha * width instead of the
  // theory-driven (sqrt(lambda) + alpha(delta)) * width.
  std::optional<double> alpha_override{};
  AlphaTildeMode alpha_tilde_mode{AlphaTildeMode::kConstant};
  std::uint64_t seed{0};
};

void validate(const PolicyConfig& config);

// Everything a policy needs about the world it will act in.
struct PolicySetup {
  int dim{0};
  int n_arms{0};
  std::int64_t total_budget{0};
  std::int64_t horizon{1};
  std::vector<ClassProfile> profiles;  // required by class-structured policies
};

// One round's outcome. The recommended arm is always recorded; `executed`
// says whether it was actually played (and a budget unit spent).
struct Decision {
  static constexpr int kNoArm = -1;
  int arm{kNoArm};
  int class_id{0};
  double retain_prob{0.0};
  bool executed{false};
  Eigen::VectorXd scores;  // per-arm selection scores, diagnostics
};

// Common surface of the budgeted policies. One decision is in flight at a
// time: decide(), then exactly one of feedback() (executed rounds, reward
// observed) or skip() (dummy action, time passes, nothing is learned).
class Policy {
 public:
  virtual ~Policy() = default;

  virtual PolicyKind kind() const = 0;
  virtual int context_dim() const = 0;
  virtual int n_arms() const = 0;
  virtual const BudgetState& budget() const = 0;

  // Arm recommendation for a context. Deterministic in the current state;
  // consumes no randomness and changes nothing, so the replay evaluator can
  // probe candidate events with it.
  virtual int choose_arm(const Eigen::VectorXd& x, int class_id,
                         Eigen::VectorXd* scores = nullptr) const = 0;

  virtual Decision decide(const Eigen::VectorXd& x, int class_id) = 0;
  virtual void feedback(const Decision& decision, const Eigen::VectorXd& x,
                        double reward) = 0;
  virtual void skip(const Decision& decision) = 0;
};

// Two-level budgeted policy: a retain LP over user classes on top, one
// ridge/UCB model per (class, arm) underneath.
class HatchPolicy final : public Policy {
 public:
  HatchPolicy(const PolicyConfig& config, const PolicySetup& setup);

  PolicyKind kind() const override { return PolicyKind::kHatch; }
  int context_dim() const override { return dim_; }
  int n_arms() const override { return n_arms_; }
  const BudgetState& budget() const override { return budget_; }
  int choose_arm(const Eigen::VectorXd& x, int class_id,
                 Eigen::VectorXd* scores = nullptr) const override;
  Decision decide(const Eigen::VectorXd& x, int class_id) override;
  void feedback(const Decision& decision, const Eigen::VectorXd& x, double reward) override;
  void skip(const Decision& decision) override;

  const RidgeModelXd& arm_model(int class_id, int arm) const;
  RidgeModelXd& arm_model(int class_id, int arm);

  PolicyConfig config;
  AllocationState alloc;
  std::vector<RidgeModelXd> arm_models;  // indexed class_id * n_arms + arm
  Rng rng;

 private:
  int dim_;
  int n_arms_;
  BudgetState budget_;

  friend class PolicyCodec;
};

// LinUCB on one global model set, no class structure. Greedy variant spends
// a budget unit every round until the budget is gone; random variant retains
// with probability b/tau.
class FlatLinUcbPolicy final : public Policy {
 public:
  FlatLinUcbPolicy(const PolicyConfig& config, const PolicySetup& setup);

  PolicyKind kind() const override { return config.policy_kind; }
  int context_dim() const override { return dim_; }
  int n_arms() const override { return n_arms_; }
  const BudgetState& budget() const override { return budget_; }
  int choose_arm(const Eigen::VectorXd& x, int class_id,
                 Eigen::VectorXd* scores = nullptr) const override;
  Decision decide(const Eigen::VectorXd& x, int class_id) override;
  void feedback(const Decision& decision, const Eigen::VectorXd& x, double reward) override;
  void skip(const Decision& decision) override;

  PolicyConfig config;
  std::vector<RidgeModelXd> arm_models;  // one per arm
  Rng rng;

 private:
  int dim_;
  int n_arms_;
  BudgetState budget_;

  friend class PolicyCodec;
};

// Count-based two-level baseline: per-class sample means with UCB bonuses
// feed the retain LP, per-(class, arm) sample means with UCB bonuses pick the
// arm. Context features are ignored everywhere.
class ClusterUcbAlpPolicy final : public Policy {
 public:
  ClusterUcbAlpPolicy(const PolicyConfig& config, const PolicySetup& setup);

  PolicyKind kind() const override { return PolicyKind::kClusterUcbAlp; }
  int context_dim() const override { return dim_; }
  int n_arms() const override { return n_arms_; }
  const BudgetState& budget() const override { return budget_; }
  int choose_arm(const Eigen::VectorXd& x, int class_id,
                 Eigen::VectorXd* scores = nullptr) const override;
  Decision decide(const Eigen::VectorXd& x, int class_id) override;
  void feedback(const Decision& decision, const Eigen::VectorXd& x, double reward) override;
  void skip(const Decision& decision) override;

  // Class-value estimates the retain LP ranks on: sample mean plus
  // sqrt(log(t) / (2 n)) bonus, optimistic 1 for unvisited classes.
  Eigen::VectorXd class_value_estimates() const;

  PolicyConfig config;
  Eigen::VectorXd phi;
  Eigen::VectorXd class_pulls;
  Eigen::VectorXd class_reward_sum;
  Eigen::MatrixXd arm_pulls;       // J x K
  Eigen::MatrixXd arm_reward_sum;  // J x K
  Rng rng;

 private:
  int dim_;
  int n_arms_;
  BudgetState budget_;

  friend class PolicyCodec;
};

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const PolicySetup& setup);

}  // namespace hatch
