#include "hatch/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "hatch/errors.hpp"

namespace hatch {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kHatch: return "hatch";
    case PolicyKind::kGreedyLinUcb: return "greedy_linucb";
    case PolicyKind::kRandomLinUcb: return "random_linucb";
    case PolicyKind::kClusterUcbAlp: return "cluster_ucb_alp";
  }
  throw std::invalid_argument("unknown policy kind");
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "hatch") return PolicyKind::kHatch;
  if (name == "greedy_linucb") return PolicyKind::kGreedyLinUcb;
  if (name == "random_linucb") return PolicyKind::kRandomLinUcb;
  if (name == "cluster_ucb_alp") return PolicyKind::kClusterUcbAlp;
  throw std::invalid_argument("unknown policy kind: " + name);
}

std::string to_string(AlphaTildeMode mode) {
  return mode == AlphaTildeMode::kConstant ? "constant" : "time_growing";
}

AlphaTildeMode alpha_tilde_mode_from_string(const std::string& name) {
  if (name == "constant") return AlphaTildeMode::kConstant;
  if (name == "time_growing") return AlphaTildeMode::kTimeGrowing;
  throw std::invalid_argument("unknown alpha_tilde_mode: " + name);
}

void validate(const PolicyConfig& config) {
  if (!(config.lambda > 0.0)) throw std::invalid_argument("policy config: lambda must be positive");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw std::invalid_argument("policy config: delta must lie in (0,1)");
  if (config.alpha_override && !(*config.alpha_override >= 0.0))
    throw std::invalid_argument("policy config: alpha_override must be >= 0");
}

namespace {

void validate_setup(const PolicySetup& setup, bool needs_classes) {
  if (setup.dim < 1) throw std::invalid_argument("policy setup: dim must be >= 1");
  if (setup.n_arms < 1) throw std::invalid_argument("policy setup: need at least one arm");
  if (setup.horizon < 1) throw std::invalid_argument("policy setup: horizon must be >= 1");
  if (setup.total_budget < 0) throw std::invalid_argument("policy setup: negative budget");
  if (needs_classes && setup.profiles.empty())
    throw std::invalid_argument("policy setup: class profiles required");
}

void check_context(const Eigen::VectorXd& x, int dim) {
  if (x.size() != dim) throw std::invalid_argument("decide: context dimension mismatch");
  if (x.squaredNorm() > 1.0 + 2e-9)
    throw std::invalid_argument("decide: context norm exceeds 1");
}

void check_feedback_contract(const Decision& decision, int n_arms, bool executed_expected) {
  if (decision.executed != executed_expected)
    throw contract_violation(executed_expected
                                 ? "feedback: decision was not executed"
                                 : "skip: decision was executed, feedback expected");
  if (executed_expected && (decision.arm < 0 || decision.arm >= n_arms))
    throw contract_violation("feedback: decision carries no valid arm");
}

// Exploration bonus multiplier: fixed alpha when overridden, otherwise the
// self-normalized-bound scale from the model's log-det state.
double bonus_scale(const RidgeModelXd& model, const PolicyConfig& config) {
  if (config.alpha_override) return *config.alpha_override;
  return exploration_scale(model, config.delta);
}

int argmax_lowest_index(const Eigen::VectorXd& scores) {
  int best = 0;
  for (int a = 1; a < scores.size(); ++a)
    if (scores[a] > scores[best]) best = a;
  return best;
}

AllocationState build_allocation(const PolicyConfig& cfg, const PolicySetup& setup) {
  validate(cfg);
  validate_setup(setup, true);
  return make_allocation(setup.profiles, cfg.delta, cfg.alpha_tilde_mode);
}

}  // namespace

// ---------------------------------------------------------------------------
// HatchPolicy
// ---------------------------------------------------------------------------

HatchPolicy::HatchPolicy(const PolicyConfig& cfg, const PolicySetup& setup)
    : config(cfg),
      alloc(build_allocation(cfg, setup)),
      rng(cfg.seed),
      dim_(setup.dim),
      n_arms_(setup.n_arms),
      budget_(make_budget(setup.total_budget, setup.horizon)) {
  if (alloc.profiles.front().center.size() != setup.dim)
    throw std::invalid_argument("hatch policy: profile dimension mismatch");
  const std::size_t total = alloc.profiles.size() * static_cast<std::size_t>(n_arms_);
  arm_models.reserve(total);
  for (std::size_t i = 0; i < total; ++i)
    arm_models.push_back(make_ridge<double>(dim_, config.lambda));
}

const RidgeModelXd& HatchPolicy::arm_model(int class_id, int arm) const {
  return arm_models[static_cast<std::size_t>(class_id) * static_cast<std::size_t>(n_arms_) +
                    static_cast<std::size_t>(arm)];
}

RidgeModelXd& HatchPolicy::arm_model(int class_id, int arm) {
  return const_cast<RidgeModelXd&>(std::as_const(*this).arm_model(class_id, arm));
}

int HatchPolicy::choose_arm(const Eigen::VectorXd& x, int class_id,
                            Eigen::VectorXd* scores) const {
  check_context(x, dim_);
  if (class_id < 0 || class_id >= static_cast<int>(alloc.profiles.size()))
    throw std::invalid_argument("choose_arm: unknown class id");
  Eigen::VectorXd s(n_arms_);
  for (int a = 0; a < n_arms_; ++a) {
    const RidgeModelXd& model = arm_model(class_id, a);
    s[a] = predict(model, x) + bonus_scale(model, config) * width(model, x);
  }
  const int best = argmax_lowest_index(s);
  if (scores) *scores = std::move(s);
  return best;
}

Decision HatchPolicy::decide(const Eigen::VectorXd& x, int class_id) {
  Decision decision;
  decision.class_id = class_id;
  decision.arm = choose_arm(x, class_id, &decision.scores);
  if (budget_.remaining_budget > 0) {
    decision.retain_prob = retain_probability(alloc, budget_, class_id);
    decision.executed = rng.bernoulli(decision.retain_prob);
  }
  return decision;
}

void HatchPolicy::feedback(const Decision& decision, const Eigen::VectorXd& x, double reward) {
  check_feedback_contract(decision, n_arms_, true);
  update(arm_model(decision.class_id, decision.arm), x, reward);
  update_class_value(alloc, decision.class_id, reward);
  step_budget(budget_, true);
}

void HatchPolicy::skip(const Decision& decision) {
  check_feedback_contract(decision, n_arms_, false);
  step_budget(budget_, false);
}

// ---------------------------------------------------------------------------
// FlatLinUcbPolicy (greedy / random resource strategies)
// ---------------------------------------------------------------------------

FlatLinUcbPolicy::FlatLinUcbPolicy(const PolicyConfig& cfg, const PolicySetup& setup)
    : config(cfg), rng(cfg.seed), dim_(setup.dim), n_arms_(setup.n_arms),
      budget_(make_budget(setup.total_budget, setup.horizon)) {
  validate(cfg);
  validate_setup(setup, false);
  if (cfg.policy_kind != PolicyKind::kGreedyLinUcb &&
      cfg.policy_kind != PolicyKind::kRandomLinUcb)
    throw std::invalid_argument("flat linucb policy: wrong policy kind");
  arm_models.reserve(static_cast<std::size_t>(n_arms_));
  for (int a = 0; a < n_arms_; ++a) arm_models.push_back(make_ridge<double>(dim_, cfg.lambda));
}

int FlatLinUcbPolicy::choose_arm(const Eigen::VectorXd& x, int /*class_id*/,
                                 Eigen::VectorXd* scores) const {
  check_context(x, dim_);
  Eigen::VectorXd s(n_arms_);
  for (int a = 0; a < n_arms_; ++a) {
    const RidgeModelXd& model = arm_models[static_cast<std::size_t>(a)];
    s[a] = predict(model, x) + bonus_scale(model, config) * width(model, x);
  }
  const int best = argmax_lowest_index(s);
  if (scores) *scores = std::move(s);
  return best;
}

Decision FlatLinUcbPolicy::decide(const Eigen::VectorXd& x, int class_id) {
  Decision decision;
  decision.class_id = class_id;
  decision.arm = choose_arm(x, class_id, &decision.scores);
  if (budget_.remaining_budget > 0) {
    if (config.policy_kind == PolicyKind::kGreedyLinUcb) {
      decision.retain_prob = 1.0;
      decision.executed = true;
    } else {
      decision.retain_prob = std::min(budget_ratio(budget_), 1.0);
      decision.executed = rng.bernoulli(decision.retain_prob);
    }
  }
  return decision;
}

void FlatLinUcbPolicy::feedback(const Decision& decision, const Eigen::VectorXd& x,
                                double reward) {
  check_feedback_contract(decision, n_arms_, true);
  update(arm_models[static_cast<std::size_t>(decision.arm)], x, reward);
  step_budget(budget_, true);
}

void FlatLinUcbPolicy::skip(const Decision& decision) {
  check_feedback_contract(decision, n_arms_, false);
  step_budget(budget_, false);
}

// ---------------------------------------------------------------------------
// ClusterUcbAlpPolicy
// ---------------------------------------------------------------------------

ClusterUcbAlpPolicy::ClusterUcbAlpPolicy(const PolicyConfig& cfg, const PolicySetup& setup)
    : config(cfg), rng(cfg.seed), dim_(setup.dim), n_arms_(setup.n_arms),
      budget_(make_budget(setup.total_budget, setup.horizon)) {
  validate(cfg);
  validate_setup(setup, true);
  const Eigen::Index n_classes = static_cast<Eigen::Index>(setup.profiles.size());
  phi.resize(n_classes);
  double phi_sum = 0.0;
  for (Eigen::Index j = 0; j < n_classes; ++j) {
    const ClassProfile& p = setup.profiles[static_cast<std::size_t>(j)];
    if (p.class_id != static_cast<int>(j))
      throw std::invalid_argument("cluster policy: class ids must be 0..J-1 in order");
    if (!(p.phi > 0.0)) throw std::invalid_argument("cluster policy: phi must be positive");
    phi[j] = p.phi;
    phi_sum += p.phi;
  }
  if (std::abs(phi_sum - 1.0) > 1e-9)
    throw std::invalid_argument("cluster policy: phi must sum to 1");
  class_pulls = Eigen::VectorXd::Zero(n_classes);
  class_reward_sum = Eigen::VectorXd::Zero(n_classes);
  arm_pulls = Eigen::MatrixXd::Zero(n_classes, n_arms_);
  arm_reward_sum = Eigen::MatrixXd::Zero(n_classes, n_arms_);
}

Eigen::VectorXd ClusterUcbAlpPolicy::class_value_estimates() const {
  const double t = static_cast<double>(round_index(budget_));
  Eigen::VectorXd values(phi.size());
  for (Eigen::Index j = 0; j < phi.size(); ++j) {
    const double n = class_pulls[j];
    values[j] =
        n > 0.0 ? class_reward_sum[j] / n + std::sqrt(std::log(t) / (2.0 * n)) : 1.0;
  }
  return values;
}

int ClusterUcbAlpPolicy::choose_arm(const Eigen::VectorXd& x, int class_id,
                                    Eigen::VectorXd* scores) const {
  check_context(x, dim_);
  if (class_id < 0 || class_id >= phi.size())
    throw std::invalid_argument("choose_arm: unknown class id");
  const double t = static_cast<double>(round_index(budget_));
  Eigen::VectorXd s(n_arms_);
  for (int a = 0; a < n_arms_; ++a) {
    const double n = arm_pulls(class_id, a);
    // Untried arms come first (ties resolved by lowest index).
    s[a] = n > 0.0 ? arm_reward_sum(class_id, a) / n + std::sqrt(std::log(t) / (2.0 * n))
                   : std::numeric_limits<double>::infinity();
  }
  const int best = argmax_lowest_index(s);
  if (scores) *scores = std::move(s);
  return best;
}

Decision ClusterUcbAlpPolicy::decide(const Eigen::VectorXd& x, int class_id) {
  Decision decision;
  decision.class_id = class_id;
  decision.arm = choose_arm(x, class_id, &decision.scores);
  if (budget_.remaining_budget > 0) {
    const DraSolutionXd plan = solve_dra(phi, class_value_estimates(), budget_ratio(budget_));
    decision.retain_prob = plan.retain[class_id];
    decision.executed = rng.bernoulli(decision.retain_prob);
  }
  return decision;
}

void ClusterUcbAlpPolicy::feedback(const Decision& decision, const Eigen::VectorXd& x,
                                   double reward) {
  check_feedback_contract(decision, n_arms_, true);
  (void)x;  // count-based: context features are ignored
  class_pulls[decision.class_id] += 1.0;
  class_reward_sum[decision.class_id] += reward;
  arm_pulls(decision.class_id, decision.arm) += 1.0;
  arm_reward_sum(decision.class_id, decision.arm) += reward;
  step_budget(budget_, true);
}

void ClusterUcbAlpPolicy::skip(const Decision& decision) {
  check_feedback_contract(decision, n_arms_, false);
  step_budget(budget_, false);
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const PolicySetup& setup) {
  switch (config.policy_kind) {
    case PolicyKind::kHatch: return std::make_unique<HatchPolicy>(config, setup);
    case PolicyKind::kGreedyLinUcb:
    case PolicyKind::kRandomLinUcb: return std::make_unique<FlatLinUcbPolicy>(config, setup);
    case PolicyKind::kClusterUcbAlp:
      return std::make_unique<ClusterUcbAlpPolicy>(config, setup);
  }
  throw std::invalid_argument("make_policy: unknown policy kind");
}

}  // namespace hatch
