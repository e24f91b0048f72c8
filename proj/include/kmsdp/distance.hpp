#pragma once

#include "kmsdp/types.hpp"

namespace kmsdp {

struct DistanceMatrix {
  Eigen::MatrixXd entries;  // N x N, D_ij = squared Euclidean distance
  int n = 0;
};

// Exact symmetric squared distances, zero diagonal. Throws on non-finite
// coordinates.
DistanceMatrix squared_distance_matrix(const PointCloud& cloud);

}  // namespace kmsdp
