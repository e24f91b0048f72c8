#include "kmsdp/distance.hpp"

#include <stdexcept>

namespace kmsdp {

DistanceMatrix squared_distance_matrix(const PointCloud& cloud) {
  cloud.validate();
  const int N = cloud.count();
  if (N < 1) throw std::invalid_argument("squared_distance_matrix: empty cloud");

  DistanceMatrix D;
  D.n = N;
  D.entries.setZero(N, N);
  // Direct pairwise differences; exact symmetry by mirroring.
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      double d2 = (cloud.data.col(i) - cloud.data.col(j)).squaredNorm();
      D.entries(i, j) = d2;
      D.entries(j, i) = d2;
    }
  }
  return D;
}

}  // namespace kmsdp
