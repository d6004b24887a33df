#include "hatch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hatch/stats.hpp"

namespace hatch {

namespace {

// Stream ids forked off the world seed.
enum : std::uint64_t {
  kValueStream = 1,
  kOffsetStream = 2,
  kWeightStream = 3,
  kAnchorStream = 4,
  kPoolStream = 5,
};

// Pool spread around each class anchor. Contexts of one class stay close so
// a clustering fit can recover the classes from features alone.
constexpr double kPoolSpread = 0.05;

// Minimum distance between class anchor directions.
constexpr double kAnchorSeparation = 0.5;

}  // namespace

Eigen::VectorXd default_synthetic_phi() {
  Eigen::VectorXd phi(10);
  phi << 0.025, 0.05, 0.075, 0.15, 0.2, 0.2, 0.15, 0.075, 0.05, 0.025;
  return phi;
}

void validate(const SyntheticConfig& config) {
  if (config.dim < 1) throw std::invalid_argument("synthetic config: dim must be >= 1");
  if (config.n_classes < 1)
    throw std::invalid_argument("synthetic config: n_classes must be >= 1");
  if (config.n_arms < 1) throw std::invalid_argument("synthetic config: n_arms must be >= 1");
  if (config.n_contexts < config.n_classes)
    throw std::invalid_argument("synthetic config: need at least one context per class");
  if (config.phi.size() != 0) {
    if (config.phi.size() != config.n_classes)
      throw std::invalid_argument("synthetic config: phi size mismatch");
    if ((config.phi.array() <= 0.0).any() || std::abs(config.phi.sum() - 1.0) > 1e-9)
      throw std::invalid_argument("synthetic config: phi is not a distribution");
  } else if (config.n_classes != 10) {
    throw std::invalid_argument("synthetic config: default phi requires 10 classes");
  }
}

SyntheticWorld generate_synthetic(const SyntheticConfig& config) {
  validate(config);
  SyntheticWorld world;
  world.config = config;
  if (world.config.phi.size() == 0) world.config.phi = default_synthetic_phi();

  const int d = config.dim;
  const int n_classes = config.n_classes;
  const int n_arms = config.n_arms;
  const Rng root(config.seed);

  Rng value_rng = root.fork(kValueStream);
  world.class_value.resize(n_classes);
  for (int j = 0; j < n_classes; ++j) world.class_value[j] = value_rng.uniform01();

  // Zero-mean arm offsets keep class_value itself as the class's expected
  // arm-level quality, which is what the allocation level estimates.
  Rng offset_rng = root.fork(kOffsetStream);
  world.arm_offset.resize(n_classes, n_arms);
  for (int j = 0; j < n_classes; ++j)
    for (int a = 0; a < n_arms; ++a) world.arm_offset(j, a) = offset_rng.uniform(-0.5, 0.5);

  Rng weight_rng = root.fork(kWeightStream);
  world.arm_weights.reserve(static_cast<std::size_t>(n_classes));
  for (int j = 0; j < n_classes; ++j) {
    Eigen::MatrixXd w(d, n_arms);
    for (int a = 0; a < n_arms; ++a) {
      for (int i = 0; i < d; ++i) w(i, a) = weight_rng.uniform01();
      const double norm = w.col(a).norm();
      if (norm > 1.0) w.col(a) /= norm;
    }
    world.arm_weights.push_back(std::move(w));
  }

  // Anchor directions are kept pairwise separated so class pools are
  // recoverable by clustering; radii stay near 1 so contexts keep the
  // near-unit norms the estimator's optimistic initialization expects.
  Rng anchor_rng = root.fork(kAnchorStream);
  Eigen::MatrixXd anchors(d, n_classes);
  for (int j = 0; j < n_classes; ++j) {
    Eigen::VectorXd direction(d);
    for (int attempt = 0; attempt < 200; ++attempt) {
      for (int i = 0; i < d; ++i) direction[i] = anchor_rng.uniform01();
      direction /= std::max(direction.norm(), 1e-12);
      bool separated = true;
      for (int k = 0; k < j && separated; ++k)
        separated = (direction - anchors.col(k).normalized()).norm() >= kAnchorSeparation;
      if (separated) break;
    }
    anchors.col(j) = anchor_rng.uniform(0.85, 1.0) * direction;
  }

  // Class labels of the pooled contexts follow phi; guarantee every class at
  // least one context by stealing from the largest pool if a class came up
  // empty.
  Rng pool_rng = root.fork(kPoolStream);
  std::vector<int> pool_sizes(static_cast<std::size_t>(n_classes), 0);
  for (int i = 0; i < config.n_contexts; ++i)
    pool_sizes[static_cast<std::size_t>(pool_rng.categorical(world.config.phi))] += 1;
  for (int j = 0; j < n_classes; ++j) {
    if (pool_sizes[static_cast<std::size_t>(j)] > 0) continue;
    int largest = 0;
    for (int k = 1; k < n_classes; ++k)
      if (pool_sizes[static_cast<std::size_t>(k)] > pool_sizes[static_cast<std::size_t>(largest)])
        largest = k;
    pool_sizes[static_cast<std::size_t>(largest)] -= 1;
    pool_sizes[static_cast<std::size_t>(j)] += 1;
  }

  world.context_pools.reserve(static_cast<std::size_t>(n_classes));
  world.class_centers.resize(d, n_classes);
  for (int j = 0; j < n_classes; ++j) {
    const int n = pool_sizes[static_cast<std::size_t>(j)];
    Eigen::MatrixXd pool(d, n);
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < d; ++i) {
        const double v = anchors(i, j) + pool_rng.uniform(-kPoolSpread, kPoolSpread);
        pool(i, c) = std::clamp(v, 0.0, 1.0);
      }
      const double norm = pool.col(c).norm();
      if (norm > 1.0) pool.col(c) /= norm;
    }
    Eigen::VectorXd center = pool.rowwise().mean();
    const double cnorm = center.norm();
    if (cnorm > 1.0) center /= cnorm;
    world.class_centers.col(j) = center;
    world.context_pools.push_back(std::move(pool));
  }
  return world;
}

namespace {

void check_indices(const SyntheticWorld& world, int class_id, int arm) {
  if (class_id < 0 || class_id >= world.config.n_classes)
    throw std::invalid_argument("synthetic world: class id out of range");
  if (arm < 0 || arm >= world.config.n_arms)
    throw std::invalid_argument("synthetic world: arm out of range");
}

}  // namespace

double reward_mean(const SyntheticWorld& world, int class_id, int arm,
                   const Eigen::VectorXd& x) {
  check_indices(world, class_id, arm);
  return world.class_value[class_id] + world.arm_offset(class_id, arm) +
         x.dot(world.arm_weights[static_cast<std::size_t>(class_id)].col(arm));
}

double expected_reward(const SyntheticWorld& world, int class_id, int arm,
                       const Eigen::VectorXd& x) {
  return normal_cdf(reward_mean(world, class_id, arm, x) - 0.5);
}

double optimal_expected_reward(const SyntheticWorld& world, int class_id,
                               const Eigen::VectorXd& x) {
  double best = 0.0;
  for (int a = 0; a < world.config.n_arms; ++a)
    best = std::max(best, expected_reward(world, class_id, a, x));
  return best;
}

double draw_reward(const SyntheticWorld& world, Rng& rng, int class_id, int arm,
                   const Eigen::VectorXd& x) {
  const double g = reward_mean(world, class_id, arm, x) + rng.normal();
  return g >= 0.5 ? 1.0 : 0.0;
}

int sample_class(const SyntheticWorld& world, Rng& rng) {
  return rng.categorical(world.config.phi);
}

const Eigen::VectorXd sample_context(const SyntheticWorld& world, Rng& rng, int class_id) {
  if (class_id < 0 || class_id >= world.config.n_classes)
    throw std::invalid_argument("sample_context: class id out of range");
  const Eigen::MatrixXd& pool = world.context_pools[static_cast<std::size_t>(class_id)];
  return pool.col(rng.uniform_int(pool.cols()));
}

EventLog make_uniform_log(const SyntheticWorld& world, std::int64_t n_events,
                          std::uint64_t seed) {
  if (n_events < 1) throw std::invalid_argument("make_uniform_log: need at least one event");
  EventLog log;
  log.dim = world.config.dim;
  log.n_arms = world.config.n_arms;
  log.events.reserve(static_cast<std::size_t>(n_events));
  Rng rng(seed);
  for (std::int64_t t = 1; t <= n_events; ++t) {
    Event e;
    e.t = t;
    const int cls = sample_class(world, rng);
    e.class_id = cls;
    e.x = sample_context(world, rng, cls);
    e.arm = static_cast<int>(rng.uniform_int(world.config.n_arms));
    e.reward = draw_reward(world, rng, cls, e.arm, e.x);
    log.events.push_back(std::move(e));
  }
  return log;
}

std::vector<ClassProfile> class_profiles(const SyntheticWorld& world) {
  std::vector<ClassProfile> profiles;
  profiles.reserve(static_cast<std::size_t>(world.config.n_classes));
  for (int j = 0; j < world.config.n_classes; ++j) {
    ClassProfile p;
    p.class_id = j;
    p.center = world.class_centers.col(j);
    p.phi = world.config.phi[j];
    profiles.push_back(std::move(p));
  }
  return profiles;
}

}  // namespace hatch
