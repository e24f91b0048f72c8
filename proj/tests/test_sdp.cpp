#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kmsdp/distance.hpp"
#include "kmsdp/rng.hpp"
#include "kmsdp/sdp.hpp"

using namespace kmsdp;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  StreamRng rng(seed, 0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.next_normal();
  return 0.5 * (A + A.transpose());
}

bool satisfies_affine(const Eigen::MatrixXd& X, int k, double tol = 1e-10) {
  if (std::abs(X.trace() - k) > tol) return false;
  const int n = static_cast<int>(X.rows());
  Eigen::VectorXd rs = X * Eigen::VectorXd::Ones(n);
  return (rs - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("affine projection lands on the constraint set") {
  for (int n : {2, 3, 5, 17}) {
    for (int k = 1; k <= std::min(n, 4); ++k) {
      Eigen::MatrixXd Y = random_symmetric(n, 100 * n + k);
      Eigen::MatrixXd X = project_trace_rowsum(Y, k);
      CHECK(satisfies_affine(X, k));
      CHECK((X - X.transpose()).norm() < 1e-12);
    }
  }
}

TEST_CASE("affine projection is idempotent") {
  Eigen::MatrixXd Y = random_symmetric(9, 42);
  Eigen::MatrixXd X1 = project_trace_rowsum(Y, 3);
  Eigen::MatrixXd X2 = project_trace_rowsum(X1, 3);
  CHECK((X1 - X2).norm() < 1e-10);
}

TEST_CASE("affine projection is orthogonal and distance-minimal") {
  const int n = 8, k = 3;
  Eigen::MatrixXd Y = random_symmetric(n, 7);
  Eigen::MatrixXd P = project_trace_rowsum(Y, k);

  // Y - P(Y) must be orthogonal to every feasible difference, and P(Y)
  // must be at least as close to Y as any other feasible point.
  Eigen::MatrixXd F0 = project_trace_rowsum(random_symmetric(n, 8), k);
  for (std::uint64_t s = 9; s < 14; ++s) {
    Eigen::MatrixXd F = project_trace_rowsum(random_symmetric(n, s), k);
    const double inner = ((Y - P).array() * (F - F0).array()).sum();
    CHECK(std::abs(inner) < 1e-9);
    CHECK((P - Y).norm() <= (F - Y).norm() + 1e-12);
  }
}

TEST_CASE("affine projection handles the single-point edge") {
  Eigen::MatrixXd Y(1, 1);
  Y(0, 0) = 0.3;
  Eigen::MatrixXd X = project_trace_rowsum(Y, 1);
  CHECK(X(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(project_trace_rowsum(Y, 2), std::invalid_argument);
}

TEST_CASE("eigenvalue_range brackets the spectrum") {
  Eigen::MatrixXd A(2, 2);
  A << 2.0, 1.0, 1.0, 2.0;
  auto [lo, hi] = eigenvalue_range(A);
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(3.0));

  Eigen::MatrixXd B(2, 2);
  B << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(eigenvalue_range(B), std::invalid_argument);
}

TEST_CASE("solver config validation rejects bad values") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.rho = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.over_relaxation = 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.over_relaxation = 0.9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("two tight pairs recover the block optimizer") {
  PointCloud cloud;
  cloud.data.resize(1, 4);
  cloud.data << 0.0, 0.1, 10.0, 10.1;
  DistanceMatrix D = squared_distance_matrix(cloud);

  SdpSolution sol = solve_kmeans_sdp(D, 2);
  CHECK(sol.status == SolverStatus::converged);
  CHECK(sol.primal_residuals.max() <= 1e-6);

  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected.block(0, 0, 2, 2).setConstant(0.5);
  expected.block(2, 2, 2, 2).setConstant(0.5);
  CHECK((sol.X - expected).norm() < 1e-3);
  CHECK(sol.objective == doctest::Approx(0.02).epsilon(1e-2));
}

TEST_CASE("k equal to N forces the identity optimizer") {
  StreamRng rng(3, 0);
  PointCloud cloud;
  cloud.data.resize(2, 5);
  for (int i = 0; i < 5; ++i) {
    cloud.data(0, i) = rng.next_normal();
    cloud.data(1, i) = rng.next_normal();
  }
  DistanceMatrix D = squared_distance_matrix(cloud);
  SdpSolution sol = solve_kmeans_sdp(D, 5);
  CHECK(sol.status == SolverStatus::converged);
  CHECK((sol.X - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-4);
  CHECK(std::abs(sol.objective) < 1e-4);
}

TEST_CASE("k equal to one forces the uniform optimizer") {
  StreamRng rng(4, 0);
  PointCloud cloud;
  cloud.data.resize(3, 6);
  for (int i = 0; i < 6; ++i)
    for (int r = 0; r < 3; ++r) cloud.data(r, i) = rng.next_normal();
  DistanceMatrix D = squared_distance_matrix(cloud);
  SdpSolution sol = solve_kmeans_sdp(D, 1);
  CHECK(sol.status == SolverStatus::converged);
  CHECK((sol.X - Eigen::MatrixXd::Constant(6, 6, 1.0 / 6.0)).norm() < 1e-4);
  CHECK(sol.objective == doctest::Approx(D.entries.sum() / 6.0).epsilon(1e-4));
}

TEST_CASE("solver output is deterministic") {
  StreamRng rng(8, 0);
  PointCloud cloud;
  cloud.data.resize(2, 8);
  for (int i = 0; i < 8; ++i) {
    cloud.data(0, i) = rng.next_normal();
    cloud.data(1, i) = rng.next_normal();
  }
  DistanceMatrix D = squared_distance_matrix(cloud);
  SdpSolution a = solve_kmeans_sdp(D, 2);
  SdpSolution b = solve_kmeans_sdp(D, 2);
  CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("max_iter exit is reported, not silently accepted") {
  StreamRng rng(9, 0);
  PointCloud cloud;
  cloud.data.resize(2, 10);
  for (int i = 0; i < 10; ++i) {
    cloud.data(0, i) = rng.next_normal();
    cloud.data(1, i) = rng.next_normal();
  }
  DistanceMatrix D = squared_distance_matrix(cloud);
  SolverConfig cfg;
  cfg.max_iter = 3;
  SdpSolution sol = solve_kmeans_sdp(D, 2, cfg);
  CHECK(sol.status == SolverStatus::max_iter);
  CHECK(sol.iterations == 3);
}

TEST_CASE("solver rejects invalid arguments") {
  PointCloud cloud;
  cloud.data.resize(1, 3);
  cloud.data << 0.0, 1.0, 2.0;
  DistanceMatrix D = squared_distance_matrix(cloud);
  CHECK_THROWS_AS(solve_kmeans_sdp(D, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_kmeans_sdp(D, 4), std::invalid_argument);
  SolverConfig bad;
  bad.tol = -1.0;
  CHECK_THROWS_AS(solve_kmeans_sdp(D, 2, bad), std::invalid_argument);
}
