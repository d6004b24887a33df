#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hatch/rng.hpp"
#include "hatch/stats.hpp"
#include "hatch/synthetic.hpp"

using hatch::generate_synthetic;
using hatch::Rng;
using hatch::SyntheticConfig;
using hatch::SyntheticWorld;

namespace {

SyntheticConfig small_config(std::uint64_t seed) {
  SyntheticConfig config;
  config.dim = 4;
  config.n_classes = 3;
  config.n_arms = 5;
  config.phi = (Eigen::VectorXd(3) << 0.2, 0.3, 0.5).finished();
  config.n_contexts = 3000;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("default occurrence distribution matches the reference setup") {
  const Eigen::VectorXd phi = hatch::default_synthetic_phi();
  CHECK(phi.size() == 10);
  CHECK(phi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi[0] == 0.025);
  CHECK(phi[4] == 0.2);
  SyntheticConfig config;  // all defaults
  CHECK_NOTHROW(hatch::validate(config));
}

TEST_CASE("invalid configurations are rejected") {
  SyntheticConfig config = small_config(1);
  config.phi[0] = -0.2;
  CHECK_THROWS_AS(hatch::validate(config), std::invalid_argument);
  config = small_config(1);
  config.phi = (Eigen::VectorXd(3) << 0.2, 0.3, 0.6).finished();
  CHECK_THROWS_AS(hatch::validate(config), std::invalid_argument);
  config = small_config(1);
  config.n_contexts = 2;
  CHECK_THROWS_AS(hatch::validate(config), std::invalid_argument);
}

TEST_CASE("same seed regenerates the identical world") {
  const SyntheticWorld a = generate_synthetic(small_config(9));
  const SyntheticWorld b = generate_synthetic(small_config(9));
  CHECK(a.class_value == b.class_value);
  CHECK(a.arm_offset == b.arm_offset);
  for (int j = 0; j < 3; ++j) {
    CHECK(a.arm_weights[static_cast<std::size_t>(j)] ==
          b.arm_weights[static_cast<std::size_t>(j)]);
    CHECK(a.context_pools[static_cast<std::size_t>(j)] ==
          b.context_pools[static_cast<std::size_t>(j)]);
  }
  const SyntheticWorld c = generate_synthetic(small_config(10));
  CHECK(a.class_value != c.class_value);
}

TEST_CASE("generated quantities respect their ranges") {
  const SyntheticWorld world = generate_synthetic(small_config(3));
  CHECK((world.class_value.array() >= 0.0).all());
  CHECK((world.class_value.array() <= 1.0).all());
  CHECK((world.arm_offset.array() >= -0.5).all());
  CHECK((world.arm_offset.array() <= 0.5).all());
  for (int j = 0; j < 3; ++j) {
    const Eigen::MatrixXd& w = world.arm_weights[static_cast<std::size_t>(j)];
    const Eigen::MatrixXd& pool = world.context_pools[static_cast<std::size_t>(j)];
    CHECK(pool.cols() >= 1);
    for (int a = 0; a < w.cols(); ++a) CHECK(w.col(a).norm() <= 1.0 + 1e-12);
    for (int c = 0; c < pool.cols(); ++c) {
      CHECK(pool.col(c).norm() <= 1.0 + 1e-12);
      CHECK((pool.col(c).array() >= 0.0).all());
      CHECK((pool.col(c).array() <= 1.0).all());
    }
    CHECK(world.class_centers.col(j).norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("class draws follow the occurrence distribution") {
  const SyntheticWorld world = generate_synthetic(SyntheticConfig{});
  Rng rng(77);
  const int n = 30000;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(10);
  for (int i = 0; i < n; ++i) counts[hatch::sample_class(world, rng)] += 1.0;
  for (int j = 0; j < 10; ++j)
    CHECK(std::abs(counts[j] / n - world.config.phi[j]) < 0.01);
}

TEST_CASE("mean parameter is exactly the value-offset-weight sum") {
  const SyntheticWorld world = generate_synthetic(small_config(5));
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int j = static_cast<int>(rng.uniform_int(3));
    const int a = static_cast<int>(rng.uniform_int(5));
    const Eigen::VectorXd x = hatch::sample_context(world, rng, j);
    const double expected =
        world.class_value[j] + world.arm_offset(j, a) +
        x.dot(world.arm_weights[static_cast<std::size_t>(j)].col(a));
    CHECK(hatch::reward_mean(world, j, a, x) == expected);
  }
}

TEST_CASE("zero weights and offsets make every arm identical") {
  SyntheticWorld world = generate_synthetic(small_config(6));
  world.arm_offset.setZero();
  for (auto& w : world.arm_weights) w.setZero();
  Rng rng(9);
  const Eigen::VectorXd x = hatch::sample_context(world, rng, 1);
  const double first = hatch::expected_reward(world, 1, 0, x);
  for (int a = 1; a < 5; ++a) CHECK(hatch::expected_reward(world, 1, a, x) == first);
  CHECK(hatch::optimal_expected_reward(world, 1, x) == first);
}

TEST_CASE("binarized draws agree with the closed-form expectation") {
  const SyntheticWorld world = generate_synthetic(small_config(12));
  Rng rng(13);
  const int j = 2, a = 1;
  const Eigen::VectorXd x = hatch::sample_context(world, rng, j);
  const double expected = hatch::expected_reward(world, j, a, x);
  CHECK(expected == doctest::Approx(hatch::normal_cdf(
                        hatch::reward_mean(world, j, a, x) - 0.5)));
  const int n = 40000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = hatch::draw_reward(world, rng, j, a, x);
    CHECK((r == 0.0 || r == 1.0));
    sum += r;
  }
  CHECK(sum / n == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("uniform log covers arms and tags true classes") {
  const SyntheticWorld world = generate_synthetic(small_config(20));
  const hatch::EventLog log = hatch::make_uniform_log(world, 5000, 99);
  CHECK(log.dim == 4);
  CHECK(log.n_arms == 5);
  CHECK(log.events.size() == 5000);
  Eigen::VectorXd arm_counts = Eigen::VectorXd::Zero(5);
  for (const hatch::Event& e : log.events) {
    REQUIRE(e.class_id.has_value());
    CHECK(*e.class_id >= 0);
    CHECK(*e.class_id < 3);
    CHECK((e.reward == 0.0 || e.reward == 1.0));
    arm_counts[e.arm] += 1.0;
  }
  for (int a = 0; a < 5; ++a)
    CHECK(arm_counts[a] / 5000.0 == doctest::Approx(0.2).epsilon(0.15));

  const hatch::EventLog again = hatch::make_uniform_log(world, 5000, 99);
  CHECK(again.events[123].x == log.events[123].x);
  CHECK(again.events[123].arm == log.events[123].arm);
}
