#include "kmsdp/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kmsdp/evaluation.hpp"
#include "kmsdp/mixture.hpp"
#include "kmsdp/parallel.hpp"
#include "kmsdp/postprocess.hpp"
#include "kmsdp/rng.hpp"

namespace kmsdp {

namespace {

double std_normal_pdf(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Integrand of the 1-D reduction of the conditional-mean integral over the
// first Voronoi cell. The inner d-1 coordinates collapse to erf powers:
// same-cell and antipodal components contribute through the first term,
// the 2d-2 orthogonal components through the second.
double alpha_integrand(double x, double c, int d) {
  const double e = std::erf(x / std::sqrt(2.0));
  double value =
      (std_normal_pdf(x - c) + std_normal_pdf(x + c)) * std::pow(e, d - 1);
  if (d >= 2) {
    value += (2.0 * d - 2.0) * std_normal_pdf(x) *
             (std_normal_cdf(x - c) - std_normal_cdf(-x - c)) *
             std::pow(e, d - 2);
  }
  return x * value;
}

AlphaResult alpha_quadrature(int d, double c, std::int64_t nodes) {
  int max_depth = 15;
  if (nodes > 0) max_depth = static_cast<int>(std::clamp<std::int64_t>(nodes, 1, 25));
  const double upper = c + 12.0;  // Gaussian tail beyond is < 1e-30
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return alpha_integrand(x, c, d); }, 0.0, upper,
      max_depth, 1e-12, &error);
  if (!(std::isfinite(value)) || error > 1e-6 * std::max(1.0, std::abs(value)))
    throw std::runtime_error("alpha: quadrature did not converge");
  return {value, error};
}

AlphaResult alpha_monte_carlo(int d, double c, std::int64_t samples,
                              std::uint64_t seed) {
  const std::int64_t n = samples > 0 ? samples : 1'000'000;
  StreamRng rng(seed, 0xa1fa0001ull);
  const int k = 2 * d;

  double sum = 0.0, sumsq = 0.0;
  std::int64_t accepted = 0;
  std::vector<double> x(d);
  for (std::int64_t s = 0; s < n; ++s) {
    int t = std::min(static_cast<int>(rng.next_unit() * k), k - 1);
    const int axis = t % d;
    const double sign = t < d ? 1.0 : -1.0;
    for (int j = 0; j < d; ++j) x[j] = rng.next_normal();
    x[axis] += sign * c;

    int argmax = 0;
    for (int j = 1; j < d; ++j)
      if (std::abs(x[j]) > std::abs(x[argmax])) argmax = j;
    if (argmax != 0 || x[0] <= 0.0) continue;

    sum += x[0];
    sumsq += x[0] * x[0];
    ++accepted;
  }
  if (accepted == 0)
    throw std::runtime_error("alpha: zero conditional samples");
  const double mean = sum / accepted;
  const double var = std::max(0.0, sumsq / accepted - mean * mean);
  return {mean, std::sqrt(var / accepted)};
}

}  // namespace

AlphaResult alpha(const AlphaQuery& query) {
  if (query.d < 1) throw std::invalid_argument("alpha: d must be >= 1");
  if (query.c < 0.0) throw std::invalid_argument("alpha: c must be nonnegative");
  if (!(query.sigma > 0.0))
    throw std::invalid_argument("alpha: sigma must be positive");
  const double c_eff = query.c / query.sigma;
  if (query.method == AlphaMethod::quadrature)
    return alpha_quadrature(query.d, c_eff, query.samples_or_nodes);
  return alpha_monte_carlo(query.d, c_eff, query.samples_or_nodes, query.seed);
}

double expected_max_abs_gaussian(int d, std::int64_t samples,
                                 std::uint64_t seed) {
  if (d < 1)
    throw std::invalid_argument("expected_max_abs_gaussian: d must be >= 1");
  if (samples < 1)
    throw std::invalid_argument("expected_max_abs_gaussian: samples must be >= 1");
  StreamRng rng(seed, 0x6d617861ull);
  double sum = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double best = 0.0;
    for (int j = 0; j < d; ++j)
      best = std::max(best, std::abs(rng.next_normal()));
    sum += best;
  }
  return sum / static_cast<double>(samples);
}

Eigen::MatrixXd voronoi_means_orthoplex(int d, double sigma, AlphaMethod method,
                                        std::int64_t budget) {
  if (d < 1)
    throw std::invalid_argument("voronoi_means_orthoplex: d must be >= 1");
  if (!(sigma > 0.0))
    throw std::invalid_argument("voronoi_means_orthoplex: sigma must be positive");
  AlphaQuery q;
  q.d = d;
  q.c = 1.0;
  q.sigma = sigma;
  q.method = method;
  q.samples_or_nodes = budget;
  const double coef = sigma * alpha(q).value;
  return coef * make_orthoplex(d);
}

std::vector<VoronoiTrialRow> run_voronoi_experiment(
    const VoronoiExperimentSpec& spec) {
  if (spec.d < 1 || spec.n_per_center < 1 || spec.trials < 1 ||
      spec.kmeanspp_restarts < 1)
    throw std::invalid_argument("run_voronoi_experiment: counts must be >= 1");

  const int k = 2 * spec.d;
  const Eigen::MatrixXd gamma = make_orthoplex(spec.d);
  const Eigen::MatrixXd mu =
      voronoi_means_orthoplex(spec.d, spec.sigma, AlphaMethod::quadrature, 0);

  std::vector<std::vector<VoronoiTrialRow>> per_trial(spec.trials);
  parallel_for(spec.trials, [&](int trial) {
    const std::uint64_t trial_seed = derive_stream(spec.seed, trial);

    MixtureSpec ms;
    ms.seed = trial_seed;
    for (int t = 0; t < k; ++t) {
      MixtureComponent comp;
      comp.center = gamma.col(t);
      comp.sigma = spec.sigma;
      comp.n = spec.n_per_center;
      comp.kind = ComponentKind::gaussian;
      ms.components.push_back(std::move(comp));
    }
    const PointCloud P = sample_mixture(ms);

    ClusteringResult best;
    bool have = false;
    for (int r = 0; r < spec.kmeanspp_restarts; ++r) {
      Eigen::MatrixXd init =
          kmeanspp_init(P, k, derive_stream(trial_seed, 0x72657374ull + r));
      ClusteringResult res = lloyd(P, init, 200);
      if (!have || res.kmeans_value < best.kmeans_value) {
        best = std::move(res);
        have = true;
      }
    }

    const double err_v = center_error(best.centers, mu).max_err;
    const double err_c = center_error(best.centers, gamma).max_err;
    auto& rows = per_trial[trial];
    rows.reserve(k);
    for (int idx = 0; idx < k; ++idx) {
      VoronoiTrialRow row;
      row.trial = trial;
      row.n = spec.n_per_center;
      row.centroid_idx = idx;
      row.x = best.centers.col(idx);
      row.err_to_voronoi = err_v;
      row.err_to_center = err_c;
      rows.push_back(std::move(row));
    }
  });

  std::vector<VoronoiTrialRow> out;
  out.reserve(static_cast<std::size_t>(spec.trials) * k);
  for (auto& rows : per_trial)
    for (auto& row : rows) out.push_back(std::move(row));
  return out;
}

MonotonicityReport check_alpha_monotonicity(int d,
                                            const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("check_alpha_monotonicity: empty grid");
  AlphaQuery base;
  base.d = d;
  base.c = 0.0;
  const AlphaResult at_zero = alpha(base);

  MonotonicityReport report;
  report.ok = true;
  for (double c : grid) {
    AlphaQuery q;
    q.d = d;
    q.c = c;
    const AlphaResult r = alpha(q);
    report.rows.push_back({d, c, r.value, r.error});
    const double slack = r.error + at_zero.error + 1e-12;
    if (r.value < at_zero.value - slack) report.ok = false;
  }
  return report;
}

}  // namespace kmsdp
