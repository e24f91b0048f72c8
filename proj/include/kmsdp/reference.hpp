#pragma once

#include "kmsdp/types.hpp"

namespace kmsdp {

struct ReferenceMatrix {
  Eigen::MatrixXd entries;  // N x N, entries >= xi, diagonal blocks == xi
  double xi = 1.0;
};

// Surrogate cost matrix for a labeled cloud: entry ((a,i),(b,j)) is
//   xi + delta_ab^2/2 + max{0, delta_ab^2/2 + 2 <r_ai - r_bj, c_a - c_b>}
// with r_ti = x_ti - c_t and delta_ab = ||c_a - c_b||. The induced SDP has
// the normalized block indicator matrix as unique minimizer with objective
// N*xi, which makes this an exact solver oracle. Centers must be pairwise
// distinct and labels present.
ReferenceMatrix build_reference_matrix(const PointCloud& cloud,
                                       const Eigen::MatrixXd& centers,
                                       double xi = 1.0);

}  // namespace kmsdp
