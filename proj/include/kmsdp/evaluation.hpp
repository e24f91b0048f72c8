#pragma once

#include <optional>
#include <vector>

#include "kmsdp/distance.hpp"
#include "kmsdp/types.hpp"

namespace kmsdp {

// Disjoint index sets covering 0..N-1.
using Partition = std::vector<std::vector<int>>;

Partition partition_from_labels(const std::vector<int>& labels, int k);

// Throws unless the sets are disjoint, in range, and cover 0..N-1.
void validate_partition(const Partition& partition, int N);

// Normalized block indicator: X_ij = 1/|A_t| when i,j share a set, else 0.
Eigen::MatrixXd partition_matrix(const Partition& partition, int N);

// Sum of squared distances to each set's centroid.
double kmeans_value(const PointCloud& P, const Partition& partition);

// (1/2) Tr(D X_part); equals kmeans_value by the lifting identity.
double lifted_value(const DistanceMatrix& D, const Partition& partition);

struct MisclassResult {
  double rate = 0.0;
  std::vector<int> permutation;  // permutation[p] = truth label matched to p
};

// Minimum Hamming error over all k! relabelings of the predictions, solved
// exactly as an assignment problem on the confusion matrix.
MisclassResult misclassification_rate(const std::vector<int>& predicted,
                                      const std::vector<int>& truth, int k);

struct CenterErrorResult {
  double max_err = 0.0;
  double mse = 0.0;
  std::vector<int> permutation;  // estimated column i matches reference column permutation[i]
};

// Bottleneck matching: the permutation minimizes the largest pairwise
// distance; mse is reported under that same permutation (among bottleneck
// optima, the one of least total squared cost, so the result is unique up
// to cost ties).
CenterErrorResult center_error(const Eigen::MatrixXd& estimated,
                               const Eigen::MatrixXd& reference);

// Exact min-cost assignment on a square cost matrix (O(k^3) Hungarian).
// Returns row -> column. Exposed for direct testing.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

// k x k confusion matrix: entry (p, t) counts points predicted p with truth t.
Eigen::MatrixXd confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& truth, int k);

struct EvalReport {
  double kmeans_value = 0.0;
  double lifted_value = 0.0;
  std::optional<double> sdp_certificate;
  std::optional<double> misclassification_rate;
  std::optional<double> center_error_max;
  std::optional<double> center_error_mse;
};

}  // namespace kmsdp
