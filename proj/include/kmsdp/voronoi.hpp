#pragma once

#include <cstdint>
#include <vector>

#include "kmsdp/types.hpp"

namespace kmsdp {

enum class AlphaMethod { quadrature, monte_carlo };

// Conditional first coordinate of the orthoplex Gaussian mixture given the
// first center's Voronoi cell, evaluated at center scale c/sigma. The
// mixture has 2d unit-variance components at c * (+-e_i); membership in
// cell 1 means argmax_i |x_i| = 1 and x_1 > 0.
struct AlphaQuery {
  int d = 1;
  double c = 0.0;
  double sigma = 1.0;
  AlphaMethod method = AlphaMethod::quadrature;
  std::int64_t samples_or_nodes = 0;  // 0 selects the per-method default
  std::uint64_t seed = 0;             // monte_carlo only
};

struct AlphaResult {
  double value = 0.0;
  double error = 0.0;  // quadrature error bound or MC standard error
};

AlphaResult alpha(const AlphaQuery& query);

// Monte Carlo estimate of E max_i |g_i|, g standard Gaussian in R^d.
// Equals alpha at c=0, which the tests exploit as an independent oracle.
double expected_max_abs_gaussian(int d, std::int64_t samples,
                                 std::uint64_t seed);

// Voronoi means of the sigma-noise unit-orthoplex mixture: column t is
// sigma * alpha_d(1/sigma) * gamma_t, so the 2d columns sum to zero exactly.
Eigen::MatrixXd voronoi_means_orthoplex(
    int d, double sigma, AlphaMethod method = AlphaMethod::quadrature,
    std::int64_t budget = 0);

struct VoronoiExperimentSpec {
  int d = 2;
  double sigma = 1.0;
  int n_per_center = 100;
  int trials = 1;
  int kmeanspp_restarts = 10;
  std::uint64_t seed = 0;
};

struct VoronoiTrialRow {
  int trial = 0;
  int n = 0;             // points per center
  int centroid_idx = 0;  // position within the trial's best centroid set
  Eigen::VectorXd x;     // the centroid
  double err_to_voronoi = 0.0;  // trial-level matched max error, repeated per row
  double err_to_center = 0.0;
};

// Per trial: sample the orthoplex mixture, run best-of-restarts k-means++
// plus Lloyd, keep the minimum-value centroids, and score the matched max
// error against the Voronoi means and against the Gaussian centers.
std::vector<VoronoiTrialRow> run_voronoi_experiment(
    const VoronoiExperimentSpec& spec);

struct AlphaTableRow {
  int d = 0;
  double c = 0.0;
  double alpha = 0.0;
  double err = 0.0;
};

struct MonotonicityReport {
  bool ok = false;  // every grid value >= value at c=0, within quadrature error
  std::vector<AlphaTableRow> rows;
};

MonotonicityReport check_alpha_monotonicity(int d,
                                            const std::vector<double>& grid);

}  // namespace kmsdp
