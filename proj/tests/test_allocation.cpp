#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hatch/allocation.hpp"
#include "hatch/errors.hpp"
#include "hatch/rng.hpp"

using hatch::AllocationState;
using hatch::BudgetState;
using hatch::ClassProfile;
using hatch::make_allocation;
using hatch::make_budget;
using hatch::Rng;
using hatch::step_budget;

namespace {

std::vector<ClassProfile> two_unit_classes() {
  ClassProfile a, b;
  a.class_id = 0;
  a.center = Eigen::Vector2d(1.0, 0.0);
  a.phi = 0.5;
  b.class_id = 1;
  b.center = Eigen::Vector2d(0.0, 1.0);
  b.phi = 0.5;
  return {a, b};
}

}  // namespace

TEST_CASE("budget stepping") {
  BudgetState b = make_budget(5, 10);
  step_budget(b, true);
  CHECK(b.remaining_budget == 4);
  CHECK(b.remaining_time == 9);
  step_budget(b, false);
  CHECK(b.remaining_budget == 4);
  CHECK(b.remaining_time == 8);

  BudgetState empty = make_budget(0, 3);
  CHECK_THROWS_AS(step_budget(empty, true), hatch::budget_violation);
  step_budget(empty, false);
  step_budget(empty, false);
  step_budget(empty, false);
  CHECK(empty.remaining_time == 0);
  CHECK_THROWS_AS(step_budget(empty, false), hatch::contract_violation);
}

TEST_CASE("profile validation") {
  auto profiles = two_unit_classes();
  CHECK_NOTHROW(make_allocation(profiles, 0.1));

  auto bad_sum = profiles;
  bad_sum[1].phi = 0.6;
  CHECK_THROWS_AS(make_allocation(bad_sum, 0.1), std::invalid_argument);

  auto dup = profiles;
  dup[1].center = dup[0].center;
  CHECK_THROWS_AS(make_allocation(dup, 0.1), std::invalid_argument);

  auto off_order = profiles;
  off_order[1].class_id = 2;
  CHECK_THROWS_AS(make_allocation(off_order, 0.1), std::invalid_argument);
}

TEST_CASE("fresh classes start optimistic and alpha_tilde matches its formula") {
  const AllocationState alloc = make_allocation(two_unit_classes(), 0.1);
  CHECK(alloc.value_estimates[0] == 1.0);
  CHECK(alloc.value_estimates[1] == 1.0);
  CHECK(alloc.alpha_tilde == doctest::Approx(std::sqrt(std::log(2.0 / 0.1) / 2.0)));
}

TEST_CASE("class value moves with a single observation") {
  AllocationState alloc = make_allocation(two_unit_classes(), 0.1);
  hatch::update_class_value(alloc, 0, 1.0);
  CHECK(alloc.value_estimates[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(alloc.value_estimates[1] == 1.0);

  hatch::update_class_value(alloc, 1, 0.0);
  CHECK(alloc.value_estimates[1] == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(hatch::update_class_value(alloc, 5, 1.0), std::invalid_argument);
}

TEST_CASE("retain probability follows the budget ratio") {
  AllocationState alloc = make_allocation(two_unit_classes(), 0.1);

  BudgetState full = make_budget(10, 10);
  CHECK(hatch::retain_probability(alloc, full, 0) == doctest::Approx(1.0));
  CHECK(hatch::retain_probability(alloc, full, 1) == doctest::Approx(1.0));

  // Fresh optimistic ties: the lower class id wins the full retention.
  BudgetState half = make_budget(5, 10);
  CHECK(hatch::retain_probability(alloc, half, 0) == doctest::Approx(1.0));
  CHECK(hatch::retain_probability(alloc, half, 1) == doctest::Approx(0.0));

  BudgetState spent = make_budget(5, 10);
  spent.remaining_budget = 0;
  CHECK_THROWS_AS(hatch::retain_probability(alloc, spent, 0), hatch::contract_violation);
  CHECK_THROWS_AS(hatch::retain_probability(alloc, full, 9), std::invalid_argument);
}

TEST_CASE("class confidence width shrinks as observations accumulate") {
  AllocationState alloc = make_allocation(two_unit_classes(), 0.1);
  const double w0 = hatch::class_width(alloc, 0);
  CHECK(w0 == doctest::Approx(1.0));
  for (int i = 0; i < 9; ++i) hatch::update_class_value(alloc, 0, 1.0);
  // |c| = 1 after N observations: width = 1/sqrt(1+N).
  CHECK(hatch::class_width(alloc, 0) == doctest::Approx(1.0 / std::sqrt(10.0)));

  const double constant = hatch::class_confidence(alloc, 0, 100);
  CHECK(constant == doctest::Approx((1.0 + alloc.alpha_tilde) / std::sqrt(10.0)));
  AllocationState growing =
      make_allocation(two_unit_classes(), 0.1, hatch::AlphaTildeMode::kTimeGrowing);
  for (int i = 0; i < 9; ++i) hatch::update_class_value(growing, 0, 1.0);
  CHECK(hatch::class_confidence(growing, 0, 100) ==
        doctest::Approx(std::sqrt(std::log(100.0) / 2.0) / std::sqrt(10.0)));
}

TEST_CASE("estimated values order correctly once both classes are well observed") {
  // Two classes, true means 0.35 and 0.65. After both sides exceed the
  // 2 log(T) / gap^2 observation count, the estimated ordering should almost
  // never be wrong.
  const double low = 0.35, high = 0.65;
  const std::int64_t horizon = 10000;
  const int needed = static_cast<int>(
      std::ceil(2.0 * std::log(static_cast<double>(horizon)) / ((high - low) * (high - low))));
  const int runs = 50;
  int misordered = 0;
  Rng seeder(555);
  for (int run = 0; run < runs; ++run) {
    Rng rng(seeder.next_u64());
    AllocationState alloc = make_allocation(two_unit_classes(), 0.1);
    int counts[2] = {0, 0};
    for (std::int64_t t = 0; t < horizon; ++t) {
      const int cls = rng.bernoulli(0.5) ? 1 : 0;
      const double mean = cls == 0 ? low : high;
      hatch::update_class_value(alloc, cls, rng.bernoulli(mean) ? 1.0 : 0.0);
      counts[cls] += 1;
    }
    REQUIRE(counts[0] >= needed);
    REQUIRE(counts[1] >= needed);
    if (alloc.value_estimates[0] >= alloc.value_estimates[1]) ++misordered;
  }
  CHECK(static_cast<double>(misordered) / runs <= 0.05);
}
