#pragma once

#include <utility>

#include "kmsdp/distance.hpp"

namespace kmsdp {

enum class SolverStatus { converged, max_iter, numerical_failure };

struct PrimalResiduals {
  double trace_gap = 0.0;    // |Tr(X) - k|
  double rowsum_gap = 0.0;   // max_i |(X1 - 1)_i|
  double neg_entry = 0.0;    // max(0, -min_ij X_ij)
  double neg_eig = 0.0;      // max(0, -lambda_min(X))

  double max() const;
};

struct SolverConfig {
  double tol = 1e-6;
  int max_iter = 20000;
  double rho = 1.0;  // penalty parameter, adaptively rescaled
  double over_relaxation = 1.6;

  void validate() const;
};

struct SdpSolution {
  Eigen::MatrixXd X;
  double objective = 0.0;  // Tr(D X) of the returned iterate
  PrimalResiduals primal_residuals;
  int iterations = 0;
  SolverStatus status = SolverStatus::numerical_failure;
};

// Minimizes Tr(DX) over {Tr(X) = k, X1 = 1, X >= 0 entrywise, X PSD} by
// consensus ADMM over the three constraint sets. Requires 1 <= k <= N.
SdpSolution solve_kmeans_sdp(const DistanceMatrix& D, int k,
                             const SolverConfig& cfg = {});

// Orthogonal projection onto {X = X^T, Tr(X) = k, X1 = 1}. Exposed for
// direct testing; the solver uses it each iteration.
Eigen::MatrixXd project_trace_rowsum(const Eigen::MatrixXd& Y, double k);

// (lambda_min, lambda_max) of a symmetric matrix. Throws on asymmetry.
std::pair<double, double> eigenvalue_range(const Eigen::MatrixXd& X);

}  // namespace kmsdp
