#include "kmsdp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kmsdp {

Partition partition_from_labels(const std::vector<int>& labels, int k) {
  if (k < 1) throw std::invalid_argument("partition_from_labels: k must be >= 1");
  Partition out(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k)
      throw std::invalid_argument("partition_from_labels: label out of range");
    out[labels[i]].push_back(static_cast<int>(i));
  }
  return out;
}

void validate_partition(const Partition& partition, int N) {
  std::vector<char> seen(N, 0);
  int total = 0;
  for (const auto& set : partition) {
    for (int idx : set) {
      if (idx < 0 || idx >= N)
        throw std::invalid_argument("partition: index out of range");
      if (seen[idx])
        throw std::invalid_argument("partition: index appears twice");
      seen[idx] = 1;
      ++total;
    }
  }
  if (total != N)
    throw std::invalid_argument("partition: does not cover all indices");
}

Eigen::MatrixXd partition_matrix(const Partition& partition, int N) {
  validate_partition(partition, N);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N, N);
  for (const auto& set : partition) {
    if (set.empty()) continue;
    const double w = 1.0 / static_cast<double>(set.size());
    for (int i : set)
      for (int j : set) X(i, j) = w;
  }
  return X;
}

double kmeans_value(const PointCloud& P, const Partition& partition) {
  validate_partition(partition, P.count());
  double value = 0.0;
  for (const auto& set : partition) {
    if (set.empty()) continue;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(P.dim());
    for (int i : set) centroid += P.data.col(i);
    centroid /= static_cast<double>(set.size());
    for (int i : set) value += (P.data.col(i) - centroid).squaredNorm();
  }
  return value;
}

double lifted_value(const DistanceMatrix& D, const Partition& partition) {
  Eigen::MatrixXd X = partition_matrix(partition, D.n);
  return 0.5 * D.entries.cwiseProduct(X).sum();
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1)
    throw std::invalid_argument("min_cost_assignment: square matrix required");
  const int n = static_cast<int>(cost.rows());
  const double INF = std::numeric_limits<double>::infinity();

  // Shortest-augmenting-path Hungarian with potentials; 1-based with a
  // virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, INF);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = INF;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) result[p[j] - 1] = j - 1;
  return result;
}

Eigen::MatrixXd confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& truth, int k) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("confusion_matrix: size mismatch");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || predicted[i] >= k)
      throw std::invalid_argument("confusion_matrix: predicted label out of range");
    if (truth[i] < 0 || truth[i] >= k)
      throw std::invalid_argument("confusion_matrix: truth label out of range");
    C(predicted[i], truth[i]) += 1.0;
  }
  return C;
}

MisclassResult misclassification_rate(const std::vector<int>& predicted,
                                      const std::vector<int>& truth, int k) {
  if (predicted.empty())
    throw std::invalid_argument("misclassification_rate: empty labels");
  Eigen::MatrixXd C = confusion_matrix(predicted, truth, k);
  // Max-weight matching on the confusion counts.
  std::vector<int> perm = min_cost_assignment(-C);
  double matched = 0.0;
  for (int p = 0; p < k; ++p) matched += C(p, perm[p]);
  MisclassResult out;
  out.permutation = std::move(perm);
  out.rate = 1.0 - matched / static_cast<double>(predicted.size());
  return out;
}

namespace {

// Perfect matching on the boolean graph edge(i,j) = dist(i,j) <= cap,
// by augmenting paths.
bool feasible_matching(const Eigen::MatrixXd& dist, double cap) {
  const int n = static_cast<int>(dist.rows());
  std::vector<int> match_col(n, -1);
  std::vector<char> visited;

  std::function<bool(int)> try_row = [&](int i) -> bool {
    for (int j = 0; j < n; ++j) {
      if (visited[j] || dist(i, j) > cap) continue;
      visited[j] = 1;
      if (match_col[j] < 0 || try_row(match_col[j])) {
        match_col[j] = i;
        return true;
      }
    }
    return false;
  };

  for (int i = 0; i < n; ++i) {
    visited.assign(n, 0);
    if (!try_row(i)) return false;
  }
  return true;
}

}  // namespace

CenterErrorResult center_error(const Eigen::MatrixXd& estimated,
                               const Eigen::MatrixXd& reference) {
  if (estimated.cols() != reference.cols())
    throw std::invalid_argument("center_error: count mismatch");
  if (estimated.rows() != reference.rows())
    throw std::invalid_argument("center_error: dimension mismatch");
  const int k = static_cast<int>(estimated.cols());
  if (k < 1) throw std::invalid_argument("center_error: empty input");

  Eigen::MatrixXd dist(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      dist(i, j) = (estimated.col(i) - reference.col(j)).norm();

  // Bottleneck threshold: smallest edge cap admitting a perfect matching,
  // found by binary search over the realized distances.
  std::vector<double> caps(dist.data(), dist.data() + k * k);
  std::sort(caps.begin(), caps.end());
  caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
  int lo = 0, hi = static_cast<int>(caps.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (feasible_matching(dist, caps[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  const double cap = caps[lo];

  // Among bottleneck-optimal matchings, take the one of least total
  // squared cost so the reported permutation is deterministic.
  const double BIG = 1e100;
  Eigen::MatrixXd cost(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      cost(i, j) = dist(i, j) <= cap ? dist(i, j) * dist(i, j) : BIG;
  std::vector<int> perm = min_cost_assignment(cost);

  CenterErrorResult out;
  out.permutation = std::move(perm);
  double mse = 0.0;
  for (int i = 0; i < k; ++i) {
    const double d = dist(i, out.permutation[i]);
    out.max_err = std::max(out.max_err, d);
    mse += d * d;
  }
  out.mse = mse / static_cast<double>(k);
  return out;
}

}  // namespace kmsdp
