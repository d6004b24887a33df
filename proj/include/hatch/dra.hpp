#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace hatch {

// Solution of the per-round retention LP
//
//   maximize   sum_j p_j * phi_j * value_j
//   subject to sum_j p_j * phi_j <= budget_ratio,  0 <= p_j <= 1
//
// solved in closed form by value-ordered thresholding: retain the
// highest-value classes outright until the occurrence mass meets the budget
// ratio, give the next class the fractional remainder, drop the rest.
template <typename Scalar>
struct DraSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> retain;  // p_j, indexed by class id
  Eigen::Index threshold_index{0};                  // count of fully retained classes
  Scalar objective{0};
};

using DraSolutionXd = DraSolution<double>;

template <typename Scalar>
DraSolution<Scalar> solve_dra(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& phi,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values,
                              Scalar budget_ratio) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = phi.size();
  if (n == 0) throw std::invalid_argument("solve_dra: empty class set");
  if (values.size() != n) throw std::invalid_argument("solve_dra: phi/value size mismatch");
  if ((phi.array() <= Scalar(0)).any())
    throw std::invalid_argument("solve_dra: occurrence probabilities must be positive");
  if (std::abs(phi.sum() - Scalar(1)) > Scalar(1e-6))
    throw std::invalid_argument("solve_dra: occurrence probabilities must sum to 1");
  if (!values.allFinite()) throw std::invalid_argument("solve_dra: non-finite class value");
  if (!(budget_ratio >= Scalar(0)) || !std::isfinite(budget_ratio))
    throw std::invalid_argument("solve_dra: budget ratio must be >= 0");

  DraSolution<Scalar> out;
  out.retain = Vector::Zero(n);

  // Slack constraint: everything fits.
  if (budget_ratio >= Scalar(1)) {
    out.retain.setOnes();
    out.threshold_index = n;
    out.objective = phi.dot(values);
    return out;
  }

  // Descending value, ties broken by ascending class id.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });

  constexpr Scalar kSlack = Scalar(1e-12);
  Scalar used = 0;
  Eigen::Index rank = 0;
  while (rank < n && used + phi[order[static_cast<std::size_t>(rank)]] <= budget_ratio + kSlack) {
    const Eigen::Index j = order[static_cast<std::size_t>(rank)];
    out.retain[j] = Scalar(1);
    used += phi[j];
    ++rank;
  }
  out.threshold_index = rank;
  if (rank < n) {
    const Eigen::Index j = order[static_cast<std::size_t>(rank)];
    const Scalar residual = budget_ratio - used;
    if (residual > kSlack) out.retain[j] = residual / phi[j];
  }
  out.objective = (out.retain.array() * phi.array() * values.array()).sum();
  return out;
}

}  // namespace hatch
