#include "kmsdp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef KMSDP_USE_LAPACKE
#include <lapacke.h>
#endif

namespace kmsdp {

namespace {

// Full symmetric eigendecomposition, eigenvalues ascending. Returns false
// on backend failure.
bool sym_eig(const Eigen::MatrixXd& A, Eigen::VectorXd& values,
             Eigen::MatrixXd& vectors) {
  const int n = static_cast<int>(A.rows());
#ifdef KMSDP_USE_LAPACKE
  vectors = A;
  values.resize(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                   vectors.data(), n, values.data());
  return info == 0;
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) return false;
  values = es.eigenvalues();
  vectors = es.eigenvectors();
  return true;
#endif
}

Eigen::MatrixXd psd_clamp(const Eigen::VectorXd& values,
                          const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd clamped = values.cwiseMax(0.0);
  return vectors * clamped.asDiagonal() * vectors.transpose();
}

}  // namespace

double PrimalResiduals::max() const {
  return std::max({trace_gap, rowsum_gap, neg_entry, neg_eig});
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig.tol: must be positive");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig.max_iter: must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("SolverConfig.rho: must be positive");
  if (!(over_relaxation >= 1.0) || !(over_relaxation < 2.0))
    throw std::invalid_argument("SolverConfig.over_relaxation: must lie in [1, 2)");
}

Eigen::MatrixXd project_trace_rowsum(const Eigen::MatrixXd& Y, double k) {
  const Eigen::Index N = Y.rows();
  if (N != Y.cols())
    throw std::invalid_argument("project_trace_rowsum: square input required");
  if (N == 1) {
    // The constraints pin the single entry to 1 and the trace to k; the
    // affine set is nonempty only when they agree.
    if (std::abs(k - 1.0) > 1e-12)
      throw std::invalid_argument("project_trace_rowsum: N=1 requires k=1");
    return Eigen::MatrixXd::Constant(1, 1, 1.0);
  }

  const double n = static_cast<double>(N);
  Eigen::MatrixXd Ys = 0.5 * (Y + Y.transpose());
  Eigen::VectorXd s = Ys.rowwise().sum();
  const double trY = Ys.trace();
  const double sum_all = s.sum();

  // Stationarity of ||X - Y||^2 with multipliers lambda (row sums) and mu
  // (trace) gives X = Ys + (lambda 1^T + 1 lambda^T)/2 + mu I; solving the
  // constraint equations yields mu and lambda in closed form.
  const double mu = (k - trY - 1.0 + sum_all / n) / (n - 1.0);
  const double t = k - trY - mu * n;
  Eigen::VectorXd lambda =
      (2.0 / n) * (Eigen::VectorXd::Ones(N) - s) -
      ((t + 2.0 * mu) / n) * Eigen::VectorXd::Ones(N);

  Eigen::MatrixXd X = Ys;
  X += 0.5 * (lambda * Eigen::RowVectorXd::Ones(N) +
              Eigen::VectorXd::Ones(N) * lambda.transpose());
  X.diagonal().array() += mu;
  return X;
}

std::pair<double, double> eigenvalue_range(const Eigen::MatrixXd& X) {
  if (X.rows() != X.cols())
    throw std::invalid_argument("eigenvalue_range: square input required");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("eigenvalue_range: input is not symmetric");
  Eigen::VectorXd w;
  Eigen::MatrixXd V;
  if (!sym_eig(0.5 * (X + X.transpose()), w, V))
    throw std::runtime_error("eigenvalue_range: eigendecomposition failed");
  return {w(0), w(w.size() - 1)};
}

SdpSolution solve_kmeans_sdp(const DistanceMatrix& D, int k,
                             const SolverConfig& cfg) {
  cfg.validate();
  const int N = D.n;
  if (N < 1 || D.entries.rows() != N || D.entries.cols() != N)
    throw std::invalid_argument("solve_kmeans_sdp: malformed distance matrix");
  if (k < 1 || k > N)
    throw std::invalid_argument("solve_kmeans_sdp: k out of range [1, N]");

  SdpSolution sol;
  if (N == 1) {
    sol.X = Eigen::MatrixXd::Constant(1, 1, 1.0);
    sol.objective = D.entries(0, 0);
    sol.iterations = 0;
    sol.status = SolverStatus::converged;
    return sol;
  }

  const double scale = std::max(D.entries.cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::MatrixXd Ds = D.entries / scale;
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(N);

  // Feasible start: the convex combination of (1/N)11^T and I with trace k
  // and unit row sums. Interior for 1 < k < N, and the exact solution at
  // the endpoints.
  Eigen::MatrixXd Z =
      ((nd - kd) / (nd - 1.0)) * Eigen::MatrixXd::Constant(N, N, 1.0 / nd) +
      ((kd - 1.0) / (nd - 1.0)) * Eigen::MatrixXd::Identity(N, N);

  double rho = cfg.rho;
  const double alpha = cfg.over_relaxation;
  std::vector<Eigen::MatrixXd> U(3, Eigen::MatrixXd::Zero(N, N));

  Eigen::VectorXd w;
  Eigen::MatrixXd V;
  std::vector<double> objective_history;
  objective_history.reserve(1024);

  PrimalResiduals res;
  int iter = 0;
  bool converged = false;
  bool failed = false;

  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    const Eigen::MatrixXd Zprev = Z;

    Eigen::MatrixXd Xa = project_trace_rowsum(Z - U[0], kd);
    Eigen::MatrixXd Xb = (Z - U[1]).cwiseMax(0.0);
    Eigen::MatrixXd Wc = Z - U[2];
    Wc = 0.5 * (Wc + Wc.transpose()).eval();
    if (!sym_eig(Wc, w, V)) {
      failed = true;
      break;
    }
    Eigen::MatrixXd Xc = psd_clamp(w, V);

    Eigen::MatrixXd Ha = alpha * Xa + (1.0 - alpha) * Zprev;
    Eigen::MatrixXd Hb = alpha * Xb + (1.0 - alpha) * Zprev;
    Eigen::MatrixXd Hc = alpha * Xc + (1.0 - alpha) * Zprev;

    Z = (Ha + U[0] + Hb + U[1] + Hc + U[2]) / 3.0 - Ds / (3.0 * rho);
    Z = 0.5 * (Z + Z.transpose()).eval();

    U[0] += Ha - Z;
    U[1] += Hb - Z;
    U[2] += Hc - Z;

    if (!Z.allFinite()) {
      failed = true;
      break;
    }

    res.trace_gap = std::abs(Z.trace() - kd);
    res.rowsum_gap = (Z.rowwise().sum().array() - 1.0).abs().maxCoeff();
    res.neg_entry = std::max(0.0, -Z.minCoeff());
    // lambda_min(Z) >= -||Z - M||_F for any PSD M; the PSD projection from
    // this sweep serves as M. Exact value is recomputed once at the end.
    res.neg_eig = (Z - Xc).norm();

    const double obj = Ds.cwiseProduct(Z).sum();
    objective_history.push_back(obj);
    bool objective_flat = false;
    if (iter > 100) {
      const double prev = objective_history[iter - 101];
      objective_flat = std::abs(obj - prev) <= cfg.tol * (1.0 + std::abs(obj));
    }
    if (res.max() <= cfg.tol && objective_flat) {
      converged = true;
      break;
    }

    if (iter % 10 == 0) {
      double r_primal = std::sqrt((Xa - Z).squaredNorm() + (Xb - Z).squaredNorm() +
                                  (Xc - Z).squaredNorm());
      double s_dual = rho * std::sqrt(3.0) * (Z - Zprev).norm();
      if (r_primal > 10.0 * s_dual) {
        rho *= 2.0;
        for (auto& u : U) u *= 0.5;
      } else if (s_dual > 10.0 * r_primal) {
        rho *= 0.5;
        for (auto& u : U) u *= 2.0;
      }
    }
  }

  if (failed && !Z.allFinite()) {
    sol.X = Eigen::MatrixXd::Zero(N, N);
    sol.iterations = std::min(iter, cfg.max_iter);
    sol.status = SolverStatus::numerical_failure;
    return sol;
  }

  sol.X = 0.5 * (Z + Z.transpose());
  sol.objective = D.entries.cwiseProduct(sol.X).sum();
  sol.iterations = std::min(iter, cfg.max_iter);

  res.trace_gap = std::abs(sol.X.trace() - kd);
  res.rowsum_gap = (sol.X.rowwise().sum().array() - 1.0).abs().maxCoeff();
  res.neg_entry = std::max(0.0, -sol.X.minCoeff());
  if (sym_eig(sol.X, w, V)) {
    res.neg_eig = std::max(0.0, -w(0));
  }
  sol.primal_residuals = res;
  sol.status = failed ? SolverStatus::numerical_failure
             : (converged ? SolverStatus::converged : SolverStatus::max_iter);
  return sol;
}

}  // namespace kmsdp
