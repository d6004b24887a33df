#include "hatch/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "hatch/errors.hpp"
#include "hatch/rng.hpp"
#include "json_util.hpp"

namespace hatch {

using nlohmann::json;

std::string to_string(ClusterMethod method) {
  return method == ClusterMethod::kGaussianMixture ? "gaussian_mixture" : "kmeans";
}

ClusterMethod cluster_method_from_string(const std::string& name) {
  if (name == "gaussian_mixture" || name == "gmm") return ClusterMethod::kGaussianMixture;
  if (name == "kmeans") return ClusterMethod::kKMeans;
  throw std::invalid_argument("unknown cluster method: " + name);
}

namespace {

constexpr double kCovarianceFloor = 1e-6;
constexpr int kKMeansMaxIter = 100;
constexpr int kEmMaxIter = 200;
constexpr double kEmTolerance = 1e-6;

Eigen::Index count_distinct(const Eigen::MatrixXd& points) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (points(i, a) != points(i, b)) return points(i, a) < points(i, b);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), lex_less);
  Eigen::Index distinct = points.cols() > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (lex_less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

int nearest_mean(const Eigen::MatrixXd& means, const Eigen::VectorXd& x) {
  int best = 0;
  double best_d2 = (x - means.col(0)).squaredNorm();
  for (int j = 1; j < means.cols(); ++j) {
    const double d2 = (x - means.col(j)).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

Eigen::MatrixXd kmeans_plus_plus_init(const Eigen::MatrixXd& points, int n_classes, Rng& rng) {
  const Eigen::Index n = points.cols();
  Eigen::MatrixXd means(points.rows(), n_classes);
  means.col(0) = points.col(rng.uniform_int(n));
  Eigen::VectorXd d2 =
      (points.colwise() - means.col(0)).colwise().squaredNorm().transpose();
  for (int j = 1; j < n_classes; ++j) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_int(n);
    }
    means.col(j) = points.col(pick);
    d2 = d2.cwiseMin(
        (points.colwise() - means.col(j)).colwise().squaredNorm().transpose());
  }
  return means;
}

std::vector<int> kmeans_fit(const Eigen::MatrixXd& points, Eigen::MatrixXd& means) {
  const Eigen::Index n = points.cols();
  const int n_classes = static_cast<int>(means.cols());
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < kKMeansMaxIter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = nearest_mean(means, points.col(i));
      if (j != assignment[static_cast<std::size_t>(i)]) {
        assignment[static_cast<std::size_t>(i)] = j;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), n_classes);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(assignment[static_cast<std::size_t>(i)]) += points.col(i);
      counts[assignment[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (int j = 0; j < n_classes; ++j) {
      if (counts[j] > 0.0) {
        means.col(j) = sums.col(j) / counts[j];
      } else {
        // Re-seed an empty cluster at the point farthest from its mean.
        Eigen::Index far = 0;
        double far_d2 = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d2 =
              (points.col(i) - means.col(assignment[static_cast<std::size_t>(i)]))
                  .squaredNorm();
          if (d2 > far_d2) {
            far_d2 = d2;
            far = i;
          }
        }
        means.col(j) = points.col(far);
      }
    }
  }
  return assignment;
}

struct ComponentCache {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_norm;  // log((2 pi)^{-d/2} det(cov)^{-1/2})
};

ComponentCache make_cache(const Eigen::MatrixXd& cov) {
  ComponentCache cache;
  cache.llt.compute(cov);
  if (cache.llt.info() != Eigen::Success)
    throw std::runtime_error("gmm: covariance not positive definite");
  double half_log_det = 0.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i)
    half_log_det += std::log(cache.llt.matrixL()(i, i));
  cache.log_norm =
      -0.5 * static_cast<double>(cov.rows()) * std::log(2.0 * M_PI) - half_log_det;
  return cache;
}

double log_gaussian(const ComponentCache& cache, const Eigen::VectorXd& centered) {
  const Eigen::VectorXd z = cache.llt.matrixL().solve(centered);
  return cache.log_norm - 0.5 * z.squaredNorm();
}

}  // namespace

ClusterModel fit_clusters(const Eigen::MatrixXd& points, int n_classes,
                          ClusterMethod method, std::uint64_t seed) {
  if (n_classes < 1) throw std::invalid_argument("fit_clusters: need at least one class");
  if (points.cols() < n_classes || count_distinct(points) < n_classes)
    throw std::invalid_argument("fit_clusters: fewer distinct points than classes");

  const Eigen::Index n = points.cols();
  const Eigen::Index d = points.rows();
  Rng rng(seed);

  ClusterModel model;
  model.method = method;
  model.means = kmeans_plus_plus_init(points, n_classes, rng);
  std::vector<int> assignment = kmeans_fit(points, model.means);

  if (method == ClusterMethod::kGaussianMixture) {
    // Initialize mixture parameters from the k-means partition.
    model.mixing = Eigen::VectorXd::Zero(n_classes);
    model.covariances.assign(static_cast<std::size_t>(n_classes),
                             Eigen::MatrixXd::Zero(d, d));
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = assignment[static_cast<std::size_t>(i)];
      model.mixing[j] += 1.0;
      const Eigen::VectorXd c = points.col(i) - model.means.col(j);
      model.covariances[static_cast<std::size_t>(j)] += c * c.transpose();
    }
    for (int j = 0; j < n_classes; ++j) {
      model.covariances[static_cast<std::size_t>(j)] /= std::max(model.mixing[j], 1.0);
      model.covariances[static_cast<std::size_t>(j)] +=
          kCovarianceFloor * Eigen::MatrixXd::Identity(d, d);
    }
    model.mixing /= static_cast<double>(n);

    Eigen::MatrixXd resp(n, n_classes);
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kEmMaxIter; ++iter) {
      // E-step in log space.
      std::vector<ComponentCache> caches;
      caches.reserve(static_cast<std::size_t>(n_classes));
      for (int j = 0; j < n_classes; ++j)
        caches.push_back(make_cache(model.covariances[static_cast<std::size_t>(j)]));
      double ll = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd logp(n_classes);
        for (int j = 0; j < n_classes; ++j)
          logp[j] = std::log(std::max(model.mixing[j], 1e-300)) +
                    log_gaussian(caches[static_cast<std::size_t>(j)],
                                 points.col(i) - model.means.col(j));
        const double m = logp.maxCoeff();
        const double lse = m + std::log((logp.array() - m).exp().sum());
        resp.row(i) = (logp.array() - lse).exp().matrix().transpose();
        ll += lse;
      }
      // M-step.
      const Eigen::VectorXd weight = resp.colwise().sum();
      for (int j = 0; j < n_classes; ++j) {
        const double wj = std::max(weight[j], 1e-12);
        model.means.col(j) = (points * resp.col(j)) / wj;
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Eigen::VectorXd c = points.col(i) - model.means.col(j);
          cov += resp(i, j) * (c * c.transpose());
        }
        model.covariances[static_cast<std::size_t>(j)] =
            cov / wj + kCovarianceFloor * Eigen::MatrixXd::Identity(d, d);
        model.mixing[j] = weight[j] / static_cast<double>(n);
      }
      if (ll - prev_ll < kEmTolerance && iter > 0) break;
      prev_ll = ll;
    }
  }

  // Empirical assignment frequencies and norm-bounded centers.
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes);
  model.phi = Eigen::VectorXd::Zero(n_classes);
  model.centers.resize(d, n_classes);
  for (int j = 0; j < n_classes; ++j) {
    Eigen::VectorXd center = model.means.col(j);
    const double norm = center.norm();
    if (norm > 1.0) center /= norm;
    model.centers.col(j) = center;
  }
  for (Eigen::Index i = 0; i < n; ++i) counts[assign_class(model, points.col(i))] += 1.0;
  model.phi = counts / static_cast<double>(n);
  return model;
}

double log_component_density(const ClusterModel& model, int class_id,
                             const Eigen::VectorXd& x) {
  if (model.method != ClusterMethod::kGaussianMixture)
    throw std::invalid_argument("log_component_density: mixture models only");
  if (class_id < 0 || class_id >= model.n_classes())
    throw std::invalid_argument("log_component_density: class id out of range");
  const ComponentCache cache =
      make_cache(model.covariances[static_cast<std::size_t>(class_id)]);
  return std::log(std::max(model.mixing[class_id], 1e-300)) +
         log_gaussian(cache, x - model.means.col(class_id));
}

int assign_class(const ClusterModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) throw std::invalid_argument("assign_class: dimension mismatch");
  if (model.method == ClusterMethod::kKMeans) return nearest_mean(model.means, x);
  int best = 0;
  double best_logp = log_component_density(model, 0, x);
  for (int j = 1; j < model.n_classes(); ++j) {
    const double logp = log_component_density(model, j, x);
    if (logp > best_logp) {
      best_logp = logp;
      best = j;
    }
  }
  return best;
}

std::vector<ClassProfile> class_profiles(const ClusterModel& model) {
  const int n_classes = model.n_classes();
  Eigen::VectorXd phi = model.phi;
  // Classes that claimed nothing keep a vanishing floor so occurrence
  // vectors stay positive for the retain LP.
  for (int j = 0; j < n_classes; ++j) phi[j] = std::max(phi[j], 1e-12);
  phi /= phi.sum();
  std::vector<ClassProfile> profiles;
  profiles.reserve(static_cast<std::size_t>(n_classes));
  for (int j = 0; j < n_classes; ++j) {
    ClassProfile p;
    p.class_id = j;
    p.center = model.centers.col(j);
    p.phi = phi[j];
    profiles.push_back(std::move(p));
  }
  return profiles;
}

ClusterModel cluster_model_from_centers(const Eigen::MatrixXd& centers,
                                        const Eigen::VectorXd& phi) {
  if (centers.cols() != phi.size())
    throw std::invalid_argument("cluster_model_from_centers: size mismatch");
  if ((phi.array() <= 0.0).any() || std::abs(phi.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("cluster_model_from_centers: phi is not a distribution");
  ClusterModel model;
  model.method = ClusterMethod::kKMeans;
  model.means = centers;
  model.phi = phi;
  model.centers.resize(centers.rows(), centers.cols());
  for (int j = 0; j < centers.cols(); ++j) {
    Eigen::VectorXd center = centers.col(j);
    const double norm = center.norm();
    if (norm > 1.0) center /= norm;
    model.centers.col(j) = center;
  }
  return model;
}

namespace {

using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::vector_from_json;
using detail::vector_to_json;

constexpr int kClusterSnapshotVersion = 1;

}  // namespace

void save_cluster_model(const std::filesystem::path& path, const ClusterModel& model) {
  json j;
  j["format"] = "hatch-cluster-model";
  j["version"] = kClusterSnapshotVersion;
  j["method"] = to_string(model.method);
  j["means"] = matrix_to_json(model.means);
  j["phi"] = vector_to_json(model.phi);
  j["centers"] = matrix_to_json(model.centers);
  if (model.method == ClusterMethod::kGaussianMixture) {
    j["mixing"] = vector_to_json(model.mixing);
    json covs = json::array();
    for (const Eigen::MatrixXd& cov : model.covariances) covs.push_back(matrix_to_json(cov));
    j["covariances"] = std::move(covs);
  }
  std::ofstream out(path);
  if (!out) throw io_error("cannot write cluster model: " + path.string());
  out << j.dump(2) << '\n';
}

ClusterModel load_cluster_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read cluster model: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw format_error("cluster model: invalid json: " + std::string(e.what()));
  }
  try {
    if (j.at("format") != "hatch-cluster-model")
      throw format_error("cluster model: wrong format tag");
    if (j.at("version") != kClusterSnapshotVersion)
      throw format_error("cluster model: unsupported version");
    ClusterModel model;
    model.method = cluster_method_from_string(j.at("method").get<std::string>());
    model.means = matrix_from_json(j.at("means"));
    model.phi = vector_from_json(j.at("phi"));
    model.centers = matrix_from_json(j.at("centers"));
    if (model.method == ClusterMethod::kGaussianMixture) {
      model.mixing = vector_from_json(j.at("mixing"));
      for (const json& cov : j.at("covariances"))
        model.covariances.push_back(matrix_from_json(cov));
      if (static_cast<int>(model.covariances.size()) != model.n_classes() ||
          model.mixing.size() != model.n_classes())
        throw format_error("cluster model: inconsistent mixture fields");
    }
    if (model.phi.size() != model.n_classes() || model.centers.cols() != model.means.cols() ||
        model.centers.rows() != model.means.rows())
      throw format_error("cluster model: inconsistent dimensions");
    return model;
  } catch (const json::exception& e) {
    throw format_error("cluster model: missing field: " + std::string(e.what()));
  }
}

}  // namespace hatch
