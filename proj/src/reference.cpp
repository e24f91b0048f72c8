#include "kmsdp/reference.hpp"

#include <stdexcept>

namespace kmsdp {

ReferenceMatrix build_reference_matrix(const PointCloud& cloud,
                                       const Eigen::MatrixXd& centers,
                                       double xi) {
  cloud.validate();
  if (!cloud.labels)
    throw std::invalid_argument("build_reference_matrix: labels required");
  if (!(xi > 0.0))
    throw std::invalid_argument("build_reference_matrix: xi must be positive");
  if (centers.rows() != cloud.data.rows())
    throw std::invalid_argument("build_reference_matrix: center dimension mismatch");

  const int N = cloud.count();
  const int k = static_cast<int>(centers.cols());
  const auto& labels = *cloud.labels;
  for (int i = 0; i < N; ++i)
    if (labels[i] < 0 || labels[i] >= k)
      throw std::invalid_argument("build_reference_matrix: label out of range");

  Eigen::MatrixXd delta2(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      delta2(a, b) = (centers.col(a) - centers.col(b)).squaredNorm();
      if (a != b && delta2(a, b) == 0.0)
        throw std::invalid_argument("build_reference_matrix: duplicate centers");
    }
  }

  // Residuals r_i = x_i - center(label_i).
  Eigen::MatrixXd r(cloud.data.rows(), N);
  for (int i = 0; i < N; ++i)
    r.col(i) = cloud.data.col(i) - centers.col(labels[i]);

  ReferenceMatrix out;
  out.xi = xi;
  out.entries.resize(N, N);
  for (int i = 0; i < N; ++i) {
    const int a = labels[i];
    for (int j = 0; j < N; ++j) {
      const int b = labels[j];
      if (a == b) {
        out.entries(i, j) = xi;
        continue;
      }
      const double half = 0.5 * delta2(a, b);
      const double cross =
          2.0 * (r.col(i) - r.col(j)).dot(centers.col(a) - centers.col(b));
      out.entries(i, j) = xi + half + std::max(0.0, half + cross);
    }
  }
  return out;
}

}  // namespace kmsdp
