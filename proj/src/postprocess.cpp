#include "kmsdp/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kmsdp/rng.hpp"

namespace kmsdp {

namespace {

// Index of the nearest center, ties to lowest index.
int nearest_center(const Eigen::VectorXd& x, const Eigen::MatrixXd& centers) {
  int best = 0;
  double best_d = (x - centers.col(0)).squaredNorm();
  for (int t = 1; t < centers.cols(); ++t) {
    double d = (x - centers.col(t)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = t;
    }
  }
  return best;
}

// Assignment, centroid recomputation, and the objective in one pass.
// Empty clusters keep the input center and are flagged.
ClusteringResult score_centers(const PointCloud& P,
                               const Eigen::MatrixXd& centers) {
  const int N = P.count();
  const int k = static_cast<int>(centers.cols());
  ClusteringResult out;
  out.assignment.resize(N);
  out.centers = centers;
  out.empty_cluster.assign(k, 0);

  std::vector<int> counts(k, 0);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(P.dim(), k);
  for (int i = 0; i < N; ++i) {
    int t = nearest_center(P.data.col(i), centers);
    out.assignment[i] = t;
    counts[t] += 1;
    sums.col(t) += P.data.col(i);
  }
  for (int t = 0; t < k; ++t) {
    if (counts[t] > 0)
      out.centers.col(t) = sums.col(t) / counts[t];
    else
      out.empty_cluster[t] = 1;
  }

  double value = 0.0;
  for (int i = 0; i < N; ++i)
    value += (P.data.col(i) - out.centers.col(out.assignment[i])).squaredNorm();
  out.kmeans_value = value;
  return out;
}

}  // namespace

DenoisedCloud denoise(const PointCloud& P, const Eigen::MatrixXd& X) {
  if (X.rows() != P.count() || X.cols() != P.count())
    throw std::invalid_argument("denoise: X dimension mismatch with cloud");
  DenoisedCloud out;
  out.columns = P.data * X;
  out.source = &P;
  return out;
}

DenoisedCloud denoise(const PointCloud& P, const SdpSolution& sol) {
  return denoise(P, sol.X);
}

Eigen::MatrixXd ball_rounding(const DenoisedCloud& cloud,
                              const RoundingConfig& cfg) {
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("ball_rounding: epsilon must be positive");
  const int N = static_cast<int>(cloud.columns.cols());
  const int k = cfg.k;
  if (k < 1 || k > N)
    throw std::invalid_argument("ball_rounding: k out of range [1, N]");

  Eigen::MatrixXd dist(N, N);
  for (int i = 0; i < N; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < N; ++j) {
      double d = (cloud.columns.col(i) - cloud.columns.col(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }

  std::vector<bool> alive(N, true);
  Eigen::MatrixXd centers(cloud.columns.rows(), k);
  for (int pick = 0; pick < k; ++pick) {
    int best = -1;
    int best_degree = -1;
    for (int i = 0; i < N; ++i) {
      if (!alive[i]) continue;
      int degree = 0;
      for (int j = 0; j < N; ++j)
        if (alive[j] && j != i && dist(i, j) <= 2.0 * cfg.epsilon) ++degree;
      if (degree > best_degree) {
        best_degree = degree;
        best = i;
      }
    }
    if (best < 0)
      throw std::runtime_error(
          "ball_rounding: survivors exhausted after " + std::to_string(pick) +
          " of " + std::to_string(k) + " picks (epsilon too large?)");
    centers.col(pick) = cloud.columns.col(best);
    for (int j = 0; j < N; ++j)
      if (alive[j] && dist(best, j) <= 4.0 * cfg.epsilon) alive[j] = false;
  }
  return centers;
}

Eigen::MatrixXd popular_locations(const DenoisedCloud& cloud, int k,
                                  double merge_tol,
                                  std::vector<int>* multiplicities) {
  const int N = static_cast<int>(cloud.columns.cols());
  if (k < 1 || k > N)
    throw std::invalid_argument("popular_locations: k out of range [1, N]");

  if (merge_tol <= 0.0) {
    double diameter = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        diameter = std::max(
            diameter, (cloud.columns.col(i) - cloud.columns.col(j)).norm());
    merge_tol = 1e-4 * diameter;
  }

  struct Bin {
    Eigen::VectorXd centroid;
    int count = 0;
    int first = 0;
  };
  std::vector<Bin> bins;
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd x = cloud.columns.col(i);
    bool placed = false;
    for (auto& bin : bins) {
      if ((x - bin.centroid).norm() <= merge_tol) {
        bin.centroid = (bin.centroid * bin.count + x) / (bin.count + 1);
        bin.count += 1;
        placed = true;
        break;
      }
    }
    if (!placed) bins.push_back({x, 1, i});
  }

  if (static_cast<int>(bins.size()) < k)
    throw std::runtime_error("popular_locations: only " +
                             std::to_string(bins.size()) + " bins for k=" +
                             std::to_string(k));

  std::vector<int> order(bins.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (bins[a].count != bins[b].count) return bins[a].count > bins[b].count;
    return bins[a].first < bins[b].first;
  });

  Eigen::MatrixXd centers(cloud.columns.rows(), k);
  if (multiplicities) multiplicities->assign(k, 0);
  for (int t = 0; t < k; ++t) {
    centers.col(t) = bins[order[t]].centroid;
    if (multiplicities) (*multiplicities)[t] = bins[order[t]].count;
  }
  return centers;
}

ClusteringResult assign_points(const PointCloud& P,
                               const Eigen::MatrixXd& centers) {
  if (centers.rows() != P.dim())
    throw std::invalid_argument("assign_points: center dimension mismatch");
  if (centers.cols() < 1)
    throw std::invalid_argument("assign_points: at least one center required");
  return score_centers(P, centers);
}

ClusteringResult lloyd(const PointCloud& P, const Eigen::MatrixXd& init_centers,
                       int max_iter) {
  if (init_centers.rows() != P.dim())
    throw std::invalid_argument("lloyd: center dimension mismatch");
  const int k = static_cast<int>(init_centers.cols());
  if (k < 1) throw std::invalid_argument("lloyd: at least one center required");
  const int N = P.count();

  Eigen::MatrixXd centers = init_centers;
  std::vector<int> prev_assignment;
  ClusteringResult result;

  for (int it = 0; it < max_iter; ++it) {
    result = score_centers(P, centers);
    centers = result.centers;

    bool any_empty = false;
    for (int t = 0; t < k; ++t) {
      if (!result.empty_cluster[t]) continue;
      any_empty = true;
      // Re-seed at the point farthest from its nearest center.
      int far_idx = 0;
      double far_d = -1.0;
      for (int i = 0; i < N; ++i) {
        double d = (P.data.col(i) - result.centers.col(result.assignment[i]))
                       .squaredNorm();
        if (d > far_d) {
          far_d = d;
          far_idx = i;
        }
      }
      centers.col(t) = P.data.col(far_idx);
    }

    if (!any_empty && result.assignment == prev_assignment) break;
    prev_assignment = result.assignment;
  }
  return result;
}

Eigen::MatrixXd kmeanspp_init(const PointCloud& P, int k, std::uint64_t seed) {
  const int N = P.count();
  if (k < 1 || k > N)
    throw std::invalid_argument("kmeanspp_init: k out of range [1, N]");

  StreamRng rng(seed, 0x6b707030ull);
  Eigen::MatrixXd centers(P.dim(), k);
  std::vector<bool> chosen(N, false);

  int first = std::min(static_cast<int>(rng.next_unit() * N), N - 1);
  centers.col(0) = P.data.col(first);
  chosen[first] = true;

  Eigen::VectorXd d2(N);
  for (int i = 0; i < N; ++i)
    d2(i) = (P.data.col(i) - centers.col(0)).squaredNorm();

  for (int t = 1; t < k; ++t) {
    double total = d2.sum();
    int pick = -1;
    if (total > 0.0) {
      double r = rng.next_unit() * total;
      double acc = 0.0;
      for (int i = 0; i < N; ++i) {
        acc += d2(i);
        if (r < acc) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (int i = N - 1; i >= 0; --i)
          if (d2(i) > 0.0) {
            pick = i;
            break;
          }
      }
    } else {
      // All remaining mass is on duplicates of chosen points; fall back to
      // a uniform draw among the unchosen so k = N stays serviceable.
      std::vector<int> open;
      for (int i = 0; i < N; ++i)
        if (!chosen[i]) open.push_back(i);
      pick = open[std::min(static_cast<int>(rng.next_unit() * open.size()),
                           static_cast<int>(open.size()) - 1)];
    }
    centers.col(t) = P.data.col(pick);
    chosen[pick] = true;
    for (int i = 0; i < N; ++i)
      d2(i) = std::min(d2(i), (P.data.col(i) - centers.col(t)).squaredNorm());
  }
  return centers;
}

}  // namespace kmsdp
