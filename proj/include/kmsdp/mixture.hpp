#pragma once

#include "kmsdp/types.hpp"

namespace kmsdp {

// Draws all component samples. Column order groups points by component,
// preserving component order; labels carry the ground truth. Deterministic
// in spec.seed: each component samples from its own derived stream.
PointCloud sample_mixture(const MixtureSpec& spec);

// k unit-norm columns in R^m summing to zero with all pairwise inner
// products -1/(k-1). Requires 2 <= k <= m+1. Sign convention: the first
// column's first nonzero entry is positive.
Eigen::MatrixXd make_simplex(int k, int m);

// Columns e_1..e_d, -e_1..-e_d of R^d, in that order.
Eigen::MatrixXd make_orthoplex(int d);

// Scaled configuration in ambient dimension m (zero-padded rows).
Eigen::MatrixXd isogon_centers(const IsogonConfig& cfg, int m);

}  // namespace kmsdp
