#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kmsdp/sdp.hpp"
#include "kmsdp/types.hpp"

namespace kmsdp {

struct DenoisedCloud {
  Eigen::MatrixXd columns;         // m x N product P*X
  const PointCloud* source = nullptr;
};

struct RoundingConfig {
  double epsilon = 0.0;  // ball radius, must be > 0
  int k = 1;
};

struct ClusteringResult {
  Eigen::MatrixXd centers;  // m x k
  std::vector<int> assignment;
  double kmeans_value = 0.0;
  std::optional<double> certificate;  // SDP objective / 2 when available
  std::vector<std::uint8_t> empty_cluster;  // per-center flag
};

DenoisedCloud denoise(const PointCloud& P, const Eigen::MatrixXd& X);
DenoisedCloud denoise(const PointCloud& P, const SdpSolution& sol);

// Iterated max-degree selection: build the graph joining columns at
// distance <= 2*eps, then k times pick the surviving vertex of maximum
// degree (ties to lowest index) and delete everything within 4*eps of it.
// Throws std::runtime_error if the survivors run out before k picks.
Eigen::MatrixXd ball_rounding(const DenoisedCloud& cloud,
                              const RoundingConfig& cfg);

// Greedy first-occurrence binning at merge_tol, returning the k bin
// centroids of highest multiplicity (ties to earliest bin). merge_tol <= 0
// selects the default 1e-4 * data diameter. Throws if fewer than k bins.
Eigen::MatrixXd popular_locations(const DenoisedCloud& cloud, int k,
                                  double merge_tol = 0.0,
                                  std::vector<int>* multiplicities = nullptr);

// Nearest-center assignment (ties to lowest index), centers recomputed as
// assignment centroids. Empty clusters keep their input center and are
// flagged.
ClusteringResult assign_points(const PointCloud& P,
                               const Eigen::MatrixXd& centers);

// Alternates assignment and recentering until the assignment is a fixed
// point or max_iter. An empty cluster is re-seeded at the point farthest
// from its nearest center.
ClusteringResult lloyd(const PointCloud& P, const Eigen::MatrixXd& init_centers,
                       int max_iter = 100);

// D^2 seeding: first center uniform over points, each subsequent center
// drawn with probability proportional to squared distance to the nearest
// chosen center.
Eigen::MatrixXd kmeanspp_init(const PointCloud& P, int k, std::uint64_t seed);

}  // namespace kmsdp
