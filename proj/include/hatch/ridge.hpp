#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace hatch {

// Incremental ridge regression with UCB confidence widths.
//
// Maintains the design state of the estimator coef = (lambda*I + X'X)^-1 X'y
// one observation at a time: the Gram matrix, its inverse (rank-one updates
// with a periodic Cholesky refactorization to cap floating-point drift), the
// moment vector X'y, and the running log det(gram)/det(lambda*I) that feeds
// the confidence radius.
template <typename Scalar>
struct RidgeModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index dim{0};
  Scalar lambda{1};
  Matrix gram;        // lambda*I + X'X
  Matrix gram_inv;    // inverse of gram, maintained incrementally
  Vector moment;      // X'y
  Vector coef;        // gram_inv * moment, cached
  std::int64_t n_obs{0};
  Scalar log_det_ratio{0};  // log det(gram) - dim*log(lambda), non-decreasing
  std::int64_t updates_since_refactor{0};

  // Rank-one drift is refreshed from a full factorization this often.
  static constexpr std::int64_t kRefactorPeriod = 1000;
};

using RidgeModelXd = RidgeModel<double>;

template <typename Scalar>
RidgeModel<Scalar> make_ridge(Eigen::Index dim, Scalar lambda) {
  if (dim < 1) throw std::invalid_argument("make_ridge: dim must be >= 1");
  if (!(lambda > 0)) throw std::invalid_argument("make_ridge: lambda must be positive");
  RidgeModel<Scalar> model;
  model.dim = dim;
  model.lambda = lambda;
  model.gram = lambda * RidgeModel<Scalar>::Matrix::Identity(dim, dim);
  model.gram_inv = (Scalar(1) / lambda) * RidgeModel<Scalar>::Matrix::Identity(dim, dim);
  model.moment = RidgeModel<Scalar>::Vector::Zero(dim);
  model.coef = RidgeModel<Scalar>::Vector::Zero(dim);
  return model;
}

namespace detail {

template <typename Scalar, typename Derived>
void check_dim(const RidgeModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x,
               const char* where) {
  if (x.size() != model.dim || x.cols() != 1)
    throw std::invalid_argument(std::string(where) + ": feature dimension mismatch");
}

// Recompute gram_inv, coef, and log_det_ratio from gram via Cholesky.
template <typename Scalar>
void refactor(RidgeModel<Scalar>& model) {
  Eigen::LLT<typename RidgeModel<Scalar>::Matrix> llt(model.gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("ridge refactor: gram not positive definite");
  model.gram_inv =
      llt.solve(RidgeModel<Scalar>::Matrix::Identity(model.dim, model.dim));
  model.coef = llt.solve(model.moment);
  Scalar log_det = 0;
  for (Eigen::Index i = 0; i < model.dim; ++i)
    log_det += Scalar(2) * std::log(llt.matrixL()(i, i));
  model.log_det_ratio = log_det - Scalar(model.dim) * std::log(model.lambda);
  model.updates_since_refactor = 0;
}

}  // namespace detail

// Squared confidence width x' gram_inv x (clamped at zero against roundoff).
template <typename Scalar, typename Derived>
Scalar width_squared(const RidgeModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(model, x, "width");
  const Scalar w2 = x.dot(model.gram_inv * x);
  return w2 > Scalar(0) ? w2 : Scalar(0);
}

template <typename Scalar, typename Derived>
Scalar width(const RidgeModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  return std::sqrt(width_squared(model, x));
}

template <typename Scalar, typename Derived>
Scalar predict(const RidgeModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(model, x, "predict");
  return x.dot(model.coef);
}

// Absorb one (x, reward) observation. Contexts are norm-bounded: callers
// normalize so that |x| <= 1 (a 1e-9 slack absorbs roundoff).
template <typename Scalar, typename Derived>
void update(RidgeModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x, Scalar reward) {
  detail::check_dim(model, x, "update");
  if (!std::isfinite(reward)) throw std::invalid_argument("update: non-finite reward");
  const Scalar norm2 = x.squaredNorm();
  if (norm2 > Scalar(1) + Scalar(2e-9))
    throw std::invalid_argument("update: context norm exceeds 1");

  const typename RidgeModel<Scalar>::Vector xv = x;
  const typename RidgeModel<Scalar>::Vector inv_x = model.gram_inv * xv;
  const Scalar w2 = std::max(xv.dot(inv_x), Scalar(0));

  model.gram.noalias() += xv * xv.transpose();
  // Sherman-Morrison step for the inverse.
  model.gram_inv.noalias() -= (inv_x * inv_x.transpose()) / (Scalar(1) + w2);
  model.moment.noalias() += reward * xv;
  model.log_det_ratio += std::log1p(w2);
  model.n_obs += 1;
  model.updates_since_refactor += 1;

  if (model.updates_since_refactor >= RidgeModel<Scalar>::kRefactorPeriod) {
    detail::refactor(model);
  } else {
    model.coef.noalias() = model.gram_inv * model.moment;
  }
}

// Confidence multiplier sqrt(lambda) + alpha, with
// alpha = sqrt(2 log(1/delta) + log det(gram)/det(lambda*I)).
template <typename Scalar>
Scalar exploration_scale(const RidgeModel<Scalar>& model, Scalar delta) {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("exploration_scale: delta must lie in (0,1)");
  const Scalar alpha = std::sqrt(Scalar(2) * std::log(Scalar(1) / delta) + model.log_det_ratio);
  return std::sqrt(model.lambda) + alpha;
}

// Optimistic reward index: prediction plus the scaled confidence width.
template <typename Scalar, typename Derived>
Scalar ucb_score(const RidgeModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x,
                 Scalar delta) {
  return predict(model, x) + exploration_scale(model, delta) * width(model, x);
}

}  // namespace hatch
