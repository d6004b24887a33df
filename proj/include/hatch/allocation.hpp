#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hatch/dra.hpp"
#include "hatch/ridge.hpp"

namespace hatch {

// One user class as seen by the allocation level: a representative context
// (norm-bounded by 1) and its occurrence probability.
struct ClassProfile {
  int class_id{0};
  Eigen::VectorXd center;
  double phi{0.0};
};

// Remaining-resource accounting for one run: total budget B over horizon T,
// with the live remainders (b, tau) that the allocation level re-plans on.
struct BudgetState {
  std::int64_t total_budget{0};
  std::int64_t horizon{1};
  std::int64_t remaining_budget{0};
  std::int64_t remaining_time{1};
};

BudgetState make_budget(std::int64_t total_budget, std::int64_t horizon);

// Remaining budget per remaining round; the live constraint of the retain LP.
double budget_ratio(const BudgetState& budget);

// 1-based index of the round about to be decided.
std::int64_t round_index(const BudgetState& budget);

// Advance one round. Spends one budget unit iff the round executed an arm.
// Executing with an empty budget is unreachable from the policies and throws.
void step_budget(BudgetState& budget, bool executed);

enum class AlphaTildeMode { kConstant, kTimeGrowing };

// Global resource-allocation state: one ridge estimator per user class, fed
// with the class center as regressor, plus the cached class-value estimates
// the retain LP ranks on. Classes never observed keep the optimistic value 1.
struct AllocationState {
  std::vector<ClassProfile> profiles;
  std::vector<RidgeModelXd> class_models;  // ridge weight fixed at 1
  Eigen::VectorXd value_estimates;         // optimistic 1 until first update
  double alpha_tilde{0.0};
  AlphaTildeMode alpha_tilde_mode{AlphaTildeMode::kConstant};
};

// Validates the profile set (ids 0..J-1 in order, phi summing to 1, distinct
// norm-bounded centers) and initializes the per-class estimators.
// alpha_tilde defaults to sqrt(log(2/delta)/2).
AllocationState make_allocation(std::vector<ClassProfile> profiles, double delta,
                                AlphaTildeMode mode = AlphaTildeMode::kConstant);

Eigen::VectorXd occurrence_vector(const AllocationState& alloc);

// Feed one observed reward for a class; re-estimates the class value at the
// class center.
void update_class_value(AllocationState& alloc, int class_id, double reward);

// Full retain-probability vector from the LP at the current budget ratio.
DraSolutionXd solve_allocation(const AllocationState& alloc, const BudgetState& budget);

// Retain probability of one class. Callers gate on remaining budget > 0.
double retain_probability(const AllocationState& alloc, const BudgetState& budget,
                          int class_id);

// Confidence width of the class-value estimate at the class center,
// |center|_{gram_inv}. Diagnostic companion of value_estimates.
double class_width(const AllocationState& alloc, int class_id);

// Scaled class-level confidence radius: (1 + alpha_tilde) * width in constant
// mode, sqrt(log(t)/2) * width in time-growing mode (t = current round).
double class_confidence(const AllocationState& alloc, int class_id, std::int64_t round);

}  // namespace hatch
