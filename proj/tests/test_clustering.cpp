#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/Dense>

#include "hatch/clustering.hpp"
#include "hatch/errors.hpp"
#include "hatch/rng.hpp"

using hatch::assign_class;
using hatch::ClusterMethod;
using hatch::ClusterModel;
using hatch::fit_clusters;
using hatch::Rng;

namespace {

// Two well-separated clouds with known proportions; separation far exceeds
// the within-cloud spread.
Eigen::MatrixXd two_clouds(int n, double first_fraction, Rng& rng) {
  Eigen::MatrixXd points(2, n);
  const Eigen::Vector2d mu0(0.1, 0.1), mu1(0.8, 0.9);
  for (int i = 0; i < n; ++i) {
    const bool first = i < static_cast<int>(first_fraction * n);
    const Eigen::Vector2d mu = first ? mu0 : mu1;
    points.col(i) = mu + 0.03 * Eigen::Vector2d(rng.normal(), rng.normal());
  }
  return points;
}

}  // namespace

TEST_CASE("two separated clouds map one-to-one onto classes") {
  Rng rng(5);
  const double fraction = 0.3;
  const Eigen::MatrixXd points = two_clouds(2000, fraction, rng);
  for (ClusterMethod method : {ClusterMethod::kKMeans, ClusterMethod::kGaussianMixture}) {
    const ClusterModel model = fit_clusters(points, 2, method, 17);
    const int cls0 = assign_class(model, Eigen::Vector2d(0.1, 0.1));
    const int cls1 = assign_class(model, Eigen::Vector2d(0.8, 0.9));
    CHECK(cls0 != cls1);
    CHECK(std::abs(model.phi[cls0] - fraction) < 0.02);
    CHECK(std::abs(model.phi[cls1] - (1.0 - fraction)) < 0.02);
    // Every sample lands with its own cloud.
    int misassigned = 0;
    for (int i = 0; i < points.cols(); ++i) {
      const int expected = i < fraction * points.cols() ? cls0 : cls1;
      if (assign_class(model, points.col(i)) != expected) ++misassigned;
    }
    CHECK(misassigned == 0);
  }
}

TEST_CASE("single class reduces to the normalized mean") {
  Rng rng(6);
  const Eigen::MatrixXd points = two_clouds(500, 1.0, rng);
  const ClusterModel model = fit_clusters(points, 1, ClusterMethod::kKMeans, 3);
  CHECK(model.phi.size() == 1);
  CHECK(model.phi[0] == doctest::Approx(1.0));
  Eigen::VectorXd mean = points.rowwise().mean();
  if (mean.norm() > 1.0) mean /= mean.norm();
  CHECK(model.centers.col(0).isApprox(mean, 1e-9));
}

TEST_CASE("refitting with the same seed reproduces the model") {
  Rng rng(7);
  const Eigen::MatrixXd points = two_clouds(800, 0.5, rng);
  const ClusterModel a = fit_clusters(points, 2, ClusterMethod::kGaussianMixture, 21);
  const ClusterModel b = fit_clusters(points, 2, ClusterMethod::kGaussianMixture, 21);
  CHECK(a.means == b.means);
  CHECK(a.phi == b.phi);
  CHECK(a.mixing == b.mixing);
  const ClusterModel c = fit_clusters(points, 2, ClusterMethod::kGaussianMixture, 22);
  (void)c;  // different seed must still be a valid fit; equality is not required
}

TEST_CASE("mixture assignment matches brute-force density evaluation") {
  Rng rng(8);
  const Eigen::MatrixXd points = two_clouds(1200, 0.4, rng);
  const ClusterModel model = fit_clusters(points, 2, ClusterMethod::kGaussianMixture, 31);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Vector2d x(rng.uniform01(), rng.uniform01());
    // Direct density: mixing_j * (2 pi)^{-d/2} det^{-1/2} exp(-q/2).
    int best = 0;
    double best_density = -1.0;
    for (int j = 0; j < 2; ++j) {
      const Eigen::MatrixXd& cov = model.covariances[static_cast<std::size_t>(j)];
      const Eigen::VectorXd c = x - model.means.col(j);
      const double q = c.dot(cov.inverse() * c);
      const double density = model.mixing[j] *
                             std::exp(-0.5 * q) /
                             (2.0 * M_PI * std::sqrt(cov.determinant()));
      if (density > best_density) {
        best_density = density;
        best = j;
      }
    }
    CHECK(assign_class(model, x) == best);
  }
}

TEST_CASE("nearest-center ties resolve to the lower class id") {
  Eigen::MatrixXd centers(2, 2);
  centers.col(0) = Eigen::Vector2d(0.5, 0.0);
  centers.col(1) = Eigen::Vector2d(-0.5, 0.0);
  const ClusterModel model =
      hatch::cluster_model_from_centers(centers, (Eigen::VectorXd(2) << 0.5, 0.5).finished());
  CHECK(assign_class(model, Eigen::Vector2d(0.0, 0.3)) == 0);
  CHECK(assign_class(model, Eigen::Vector2d(0.5, 0.0)) == 0);
  CHECK(assign_class(model, Eigen::Vector2d(-0.5, 0.1)) == 1);
}

TEST_CASE("too few distinct points is rejected") {
  Eigen::MatrixXd points(2, 5);
  for (int i = 0; i < 5; ++i) points.col(i) = Eigen::Vector2d(0.3, 0.3);
  CHECK_THROWS_AS(fit_clusters(points, 2, ClusterMethod::kKMeans, 1), std::invalid_argument);
  Eigen::MatrixXd one(2, 1);
  one.col(0) = Eigen::Vector2d(0.1, 0.1);
  CHECK_THROWS_AS(fit_clusters(one, 2, ClusterMethod::kKMeans, 1), std::invalid_argument);
}

TEST_CASE("profiles floor empty classes to keep occurrence positive") {
  Eigen::MatrixXd centers(2, 2);
  centers.col(0) = Eigen::Vector2d(0.5, 0.0);
  centers.col(1) = Eigen::Vector2d(0.0, 0.5);
  ClusterModel model =
      hatch::cluster_model_from_centers(centers, (Eigen::VectorXd(2) << 0.5, 0.5).finished());
  model.phi << 1.0, 0.0;  // degenerate fit
  const auto profiles = hatch::class_profiles(model);
  CHECK(profiles[1].phi > 0.0);
  CHECK(profiles[0].phi + profiles[1].phi == doctest::Approx(1.0));
}

TEST_CASE("cluster snapshots round-trip and reject corruption") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hatch_cluster_snap";
  fs::create_directories(dir);
  Rng rng(9);
  const Eigen::MatrixXd points = two_clouds(600, 0.5, rng);
  const ClusterModel model = fit_clusters(points, 2, ClusterMethod::kGaussianMixture, 41);
  hatch::save_cluster_model(dir / "model.json", model);
  const ClusterModel loaded = hatch::load_cluster_model(dir / "model.json");
  CHECK(loaded.method == model.method);
  CHECK(loaded.means.isApprox(model.means, 0.0));
  CHECK(loaded.phi.isApprox(model.phi, 0.0));
  CHECK(loaded.mixing.isApprox(model.mixing, 0.0));
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector2d x(rng.uniform01(), rng.uniform01());
    CHECK(assign_class(loaded, x) == assign_class(model, x));
  }

  std::ofstream bad(dir / "bad.json");
  bad << "{\"format\": \"something-else\"}";
  bad.close();
  CHECK_THROWS_AS(hatch::load_cluster_model(dir / "bad.json"), hatch::format_error);
  CHECK_THROWS_AS(hatch::load_cluster_model(dir / "missing.json"), hatch::io_error);
  fs::remove_all(dir);
}
