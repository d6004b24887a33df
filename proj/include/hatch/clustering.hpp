#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hatch/allocation.hpp"

namespace hatch {

enum class ClusterMethod { kGaussianMixture, kKMeans };

std::string to_string(ClusterMethod method);
ClusterMethod cluster_method_from_string(const std::string& name);

// Context-to-class mapping fitted offline. For the Gaussian mixture,
// assignment is the maximum-posterior component; for k-means, the nearest
// mean. `phi` holds the empirical assignment frequencies on the fitting set
// and `centers` the component means rescaled into the unit ball, which is
// what the allocation level consumes.
struct ClusterModel {
  ClusterMethod method{ClusterMethod::kKMeans};
  Eigen::MatrixXd means;                      // dim x J
  std::vector<Eigen::MatrixXd> covariances;   // J of dim x dim (mixture only)
  Eigen::VectorXd mixing;                     // mixture weights (mixture only)
  Eigen::VectorXd phi;
  Eigen::MatrixXd centers;                    // dim x J, |center| <= 1

  int n_classes() const { return static_cast<int>(means.cols()); }
  int dim() const { return static_cast<int>(means.rows()); }
};

// Fit on points (one column per context). K-means uses seeded kmeans++
// initialization and Lloyd iterations; the Gaussian mixture starts from that
// k-means solution and runs expectation-maximization until the total
// log-likelihood improves by less than 1e-6 or 200 iterations pass.
ClusterModel fit_clusters(const Eigen::MatrixXd& points, int n_classes,
                          ClusterMethod method, std::uint64_t seed);

int assign_class(const ClusterModel& model, const Eigen::VectorXd& x);

// Log joint density log(mixing_j) + log N(x; mean_j, cov_j); assignment
// argmax for the mixture. Exposed for verification against direct density
// evaluation.
double log_component_density(const ClusterModel& model, int class_id,
                             const Eigen::VectorXd& x);

// Profiles for policy setup. Classes that claimed no fitting points get a
// vanishing floor probability so downstream occurrence vectors stay positive.
std::vector<ClassProfile> class_profiles(const ClusterModel& model);

// Builds a nearest-center model from known per-class centers and
// occurrence probabilities (used when classes are known by construction).
ClusterModel cluster_model_from_centers(const Eigen::MatrixXd& centers,
                                        const Eigen::VectorXd& phi);

void save_cluster_model(const std::filesystem::path& path, const ClusterModel& model);
ClusterModel load_cluster_model(const std::filesystem::path& path);

}  // namespace hatch
