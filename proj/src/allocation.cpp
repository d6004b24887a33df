#include "hatch/allocation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hatch/errors.hpp"

namespace hatch {

BudgetState make_budget(std::int64_t total_budget, std::int64_t horizon) {
  if (total_budget < 0) throw std::invalid_argument("make_budget: negative budget");
  if (horizon < 1) throw std::invalid_argument("make_budget: horizon must be >= 1");
  BudgetState budget;
  budget.total_budget = total_budget;
  budget.horizon = horizon;
  budget.remaining_budget = total_budget;
  budget.remaining_time = horizon;
  return budget;
}

double budget_ratio(const BudgetState& budget) {
  return static_cast<double>(budget.remaining_budget) /
         static_cast<double>(budget.remaining_time);
}

std::int64_t round_index(const BudgetState& budget) {
  return budget.horizon - budget.remaining_time + 1;
}

void step_budget(BudgetState& budget, bool executed) {
  if (budget.remaining_time < 1)
    throw contract_violation("step_budget: horizon already consumed");
  if (executed) {
    if (budget.remaining_budget <= 0)
      throw budget_violation("step_budget: executed with empty budget");
    budget.remaining_budget -= 1;
  }
  budget.remaining_time -= 1;
}

AllocationState make_allocation(std::vector<ClassProfile> profiles, double delta,
                                AlphaTildeMode mode) {
  if (profiles.empty()) throw std::invalid_argument("make_allocation: no classes");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("make_allocation: delta must lie in (0,1)");

  const Eigen::Index dim = profiles.front().center.size();
  double phi_sum = 0.0;
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    const ClassProfile& p = profiles[j];
    if (p.class_id != static_cast<int>(j))
      throw std::invalid_argument("make_allocation: class ids must be 0..J-1 in order");
    if (p.center.size() != dim)
      throw std::invalid_argument("make_allocation: inconsistent center dimension");
    if (p.center.norm() > 1.0 + 1e-9)
      throw std::invalid_argument("make_allocation: class center norm exceeds 1");
    if (!(p.phi > 0.0 && p.phi <= 1.0))
      throw std::invalid_argument("make_allocation: phi must lie in (0,1]");
    phi_sum += p.phi;
    for (std::size_t k = 0; k < j; ++k) {
      if ((profiles[k].center - p.center).norm() == 0.0)
        throw std::invalid_argument("make_allocation: duplicate class centers");
    }
  }
  if (std::abs(phi_sum - 1.0) > 1e-9)
    throw std::invalid_argument("make_allocation: phi must sum to 1");

  AllocationState alloc;
  alloc.profiles = std::move(profiles);
  alloc.class_models.reserve(alloc.profiles.size());
  for (std::size_t j = 0; j < alloc.profiles.size(); ++j)
    alloc.class_models.push_back(make_ridge<double>(dim, 1.0));
  alloc.value_estimates =
      Eigen::VectorXd::Ones(static_cast<Eigen::Index>(alloc.profiles.size()));
  alloc.alpha_tilde = std::sqrt(std::log(2.0 / delta) / 2.0);
  alloc.alpha_tilde_mode = mode;
  return alloc;
}

namespace {

void check_class_id(const AllocationState& alloc, int class_id, const char* where) {
  if (class_id < 0 || class_id >= static_cast<int>(alloc.profiles.size()))
    throw std::invalid_argument(std::string(where) + ": unknown class id");
}

}  // namespace

Eigen::VectorXd occurrence_vector(const AllocationState& alloc) {
  Eigen::VectorXd phi(static_cast<Eigen::Index>(alloc.profiles.size()));
  for (std::size_t j = 0; j < alloc.profiles.size(); ++j) phi[static_cast<Eigen::Index>(j)] = alloc.profiles[j].phi;
  return phi;
}

void update_class_value(AllocationState& alloc, int class_id, double reward) {
  check_class_id(alloc, class_id, "update_class_value");
  if (!std::isfinite(reward))
    throw std::invalid_argument("update_class_value: non-finite reward");
  const Eigen::VectorXd& center = alloc.profiles[static_cast<std::size_t>(class_id)].center;
  RidgeModelXd& model = alloc.class_models[static_cast<std::size_t>(class_id)];
  update(model, center, reward);
  alloc.value_estimates[class_id] = predict(model, center);
}

DraSolutionXd solve_allocation(const AllocationState& alloc, const BudgetState& budget) {
  return solve_dra(occurrence_vector(alloc), alloc.value_estimates, budget_ratio(budget));
}

double retain_probability(const AllocationState& alloc, const BudgetState& budget,
                          int class_id) {
  check_class_id(alloc, class_id, "retain_probability");
  if (budget.remaining_budget <= 0)
    throw contract_violation("retain_probability: caller must gate on remaining budget");
  return solve_allocation(alloc, budget).retain[class_id];
}

double class_width(const AllocationState& alloc, int class_id) {
  check_class_id(alloc, class_id, "class_width");
  return width(alloc.class_models[static_cast<std::size_t>(class_id)],
               alloc.profiles[static_cast<std::size_t>(class_id)].center);
}

double class_confidence(const AllocationState& alloc, int class_id, std::int64_t round) {
  const double w = class_width(alloc, class_id);
  if (alloc.alpha_tilde_mode == AlphaTildeMode::kTimeGrowing) {
    const double t = static_cast<double>(round < 1 ? 1 : round);
    return std::sqrt(std::log(t) / 2.0) * w;
  }
  return (1.0 + alloc.alpha_tilde) * w;
}

}  // namespace hatch
