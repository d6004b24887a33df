#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hatch/allocation.hpp"
#include "hatch/events.hpp"
#include "hatch/rng.hpp"

namespace hatch {

// Synthetic benchmark parameters. Defaults reproduce the reference setup:
// 5-dimensional contexts, 10 user classes with a fixed symmetric occurrence
// distribution, 10 arms, 30000 pooled contexts.
struct SyntheticConfig {
  int dim{5};
  int n_classes{10};
  int n_arms{10};
  Eigen::VectorXd phi;  // empty = default symmetric distribution (10 classes)
  int n_contexts{30000};
  std::uint64_t seed{0};
};

Eigen::VectorXd default_synthetic_phi();
void validate(const SyntheticConfig& config);

// A fully materialized benchmark world. Rewards for (class j, arm a, context
// x) are drawn from Normal(class_value[j] + arm_offset(j,a) + x.w_{j,a}, 1)
// and binarized at 0.5, so the true expected binary reward is
// Phi(mean - 0.5) and regret has an exact oracle.
struct SyntheticWorld {
  SyntheticConfig config;
  Eigen::VectorXd class_value;             // per-class base value, uniform [0,1]
  Eigen::MatrixXd arm_offset;              // J x K offsets, uniform [0,1]
  std::vector<Eigen::MatrixXd> arm_weights;    // per class: dim x K, columns |w| <= 1
  std::vector<Eigen::MatrixXd> context_pools;  // per class: dim x N_j, columns |x| <= 1
  Eigen::MatrixXd class_centers;           // dim x J, normalized pool means
};

// Deterministic world from config.seed.
SyntheticWorld generate_synthetic(const SyntheticConfig& config);

// Gaussian mean before binarization: class_value + arm_offset + x.w.
double reward_mean(const SyntheticWorld& world, int class_id, int arm,
                   const Eigen::VectorXd& x);

// True expected binarized reward Phi(mean - 0.5).
double expected_reward(const SyntheticWorld& world, int class_id, int arm,
                       const Eigen::VectorXd& x);

// Best arm's expected binarized reward at x; the regret oracle's benchmark.
double optimal_expected_reward(const SyntheticWorld& world, int class_id,
                               const Eigen::VectorXd& x);

// One binarized reward draw.
double draw_reward(const SyntheticWorld& world, Rng& rng, int class_id, int arm,
                   const Eigen::VectorXd& x);

int sample_class(const SyntheticWorld& world, Rng& rng);
const Eigen::VectorXd sample_context(const SyntheticWorld& world, Rng& rng, int class_id);

// Class profiles (centers + occurrence probabilities) for policy setup.
std::vector<ClassProfile> class_profiles(const SyntheticWorld& world);

// Offline log served by a uniform-random display policy: every event draws a
// class from phi, a context from that class pool, an arm uniformly, and one
// binarized reward. Uniform logging keeps rejection-matched replay unbiased.
EventLog make_uniform_log(const SyntheticWorld& world, std::int64_t n_events,
                          std::uint64_t seed);

}  // namespace hatch
