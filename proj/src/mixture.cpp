#include "kmsdp/mixture.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kmsdp/rng.hpp"

namespace kmsdp {

PointCloud sample_mixture(const MixtureSpec& spec) {
  spec.validate();
  const int m = spec.dim();
  const int N = spec.total_points();

  PointCloud out;
  out.data.resize(m, N);
  std::vector<int> labels(N);

  int col = 0;
  for (int t = 0; t < spec.component_count(); ++t) {
    const auto& comp = spec.components[t];
    StreamRng rng(spec.seed, static_cast<std::uint64_t>(t));
    for (int i = 0; i < comp.n; ++i, ++col) {
      labels[col] = t;
      if (comp.kind == ComponentKind::gaussian) {
        for (int r = 0; r < m; ++r)
          out.data(r, col) = comp.center(r) + comp.sigma * rng.next_normal();
      } else {
        Eigen::VectorXd g(m);
        double norm2 = 0.0;
        do {
          for (int r = 0; r < m; ++r) g(r) = rng.next_normal();
          norm2 = g.squaredNorm();
        } while (norm2 == 0.0);
        // Uniform in the radius-sigma ball: sphere direction, radius R*U^(1/m).
        double radius = comp.sigma * std::pow(rng.next_unit(), 1.0 / m);
        out.data.col(col) = comp.center + (radius / std::sqrt(norm2)) * g;
      }
    }
  }
  out.labels = std::move(labels);
  return out;
}

Eigen::MatrixXd make_simplex(int k, int m) {
  if (k < 2) throw std::invalid_argument("make_simplex: k must be >= 2");
  if (k > m + 1)
    throw std::invalid_argument("make_simplex: need ambient dimension >= k-1");

  // Gram matrix of the target configuration: unit diagonal, off-diagonal
  // -1/(k-1). Its eigenvalues are 0 (once) and k/(k-1) (k-1 times); any
  // scaled eigenbasis factor reproduces it.
  const double kk = static_cast<double>(k);
  Eigen::MatrixXd gram =
      (kk / (kk - 1.0)) * Eigen::MatrixXd::Identity(k, k) -
      (1.0 / (kk - 1.0)) * Eigen::MatrixXd::Ones(k, k);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("make_simplex: eigendecomposition failed");

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, k);
  // Eigenvalues ascend, so the k-1 nonzero ones come last.
  for (int r = 0; r < k - 1; ++r) {
    double lambda = es.eigenvalues()(r + 1);
    out.row(r) = std::sqrt(lambda) * es.eigenvectors().col(r + 1).transpose();
  }
  // Eigenvector signs are arbitrary; fix each row's first nonzero positive.
  for (int r = 0; r < k - 1; ++r) {
    for (int j = 0; j < k; ++j) {
      if (std::abs(out(r, j)) > 1e-12) {
        if (out(r, j) < 0.0) out.row(r) = -out.row(r);
        break;
      }
    }
  }
  return out;
}

Eigen::MatrixXd make_orthoplex(int d) {
  if (d < 1) throw std::invalid_argument("make_orthoplex: d must be >= 1");
  Eigen::MatrixXd out(d, 2 * d);
  out << Eigen::MatrixXd::Identity(d, d), -Eigen::MatrixXd::Identity(d, d);
  return out;
}

Eigen::MatrixXd isogon_centers(const IsogonConfig& cfg, int m) {
  if (cfg.scale <= 0.0)
    throw std::invalid_argument("isogon_centers: scale must be positive");
  if (cfg.kind == IsogonKind::simplex) {
    return cfg.scale * make_simplex(cfg.k, m);
  }
  if (cfg.k < 2 || cfg.k % 2 != 0)
    throw std::invalid_argument("isogon_centers: orthoplex needs even k >= 2");
  const int d = cfg.k / 2;
  if (m < d)
    throw std::invalid_argument("isogon_centers: need ambient dimension >= k/2");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, cfg.k);
  out.topRows(d) = cfg.scale * make_orthoplex(d);
  return out;
}

}  // namespace kmsdp
