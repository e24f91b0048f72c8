#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "kmsdp/mixture.hpp"
#include "kmsdp/voronoi.hpp"

using namespace kmsdp;

namespace {

// One-dimensional case in closed form: conditioning on {x > 0} under the
// two-sided mixture gives 2*phi(c) + c*erf(c/sqrt(2)).
double alpha1_closed_form(double c) {
  const double phi = std::exp(-0.5 * c * c) / std::sqrt(2.0 * M_PI);
  return 2.0 * phi + c * std::erf(c / std::sqrt(2.0));
}

AlphaResult quad(int d, double c, double sigma = 1.0) {
  AlphaQuery q;
  q.d = d;
  q.c = c;
  q.sigma = sigma;
  return alpha(q);
}

}  // namespace

TEST_CASE("quadrature matches the one-dimensional closed form") {
  for (double c : {0.0, 0.3, 1.0, 2.5, 6.0}) {
    AlphaResult r = quad(1, c);
    CHECK(r.value ==
          doctest::Approx(alpha1_closed_form(c)).epsilon(1e-10));
    CHECK(r.error < 1e-8);
  }
}

TEST_CASE("frozen quadrature anchors") {
  CHECK(quad(1, 0.0).value ==
        doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
  CHECK(quad(2, 1.0).value ==
        doctest::Approx(1.3992824567484914).epsilon(1e-9));
  // E max-abs of a standard Gaussian vector, spot values.
  CHECK(quad(3, 0.0).value == doctest::Approx(1.326387).epsilon(1e-5));
  CHECK(quad(8, 0.0).value == doctest::Approx(1.783367).epsilon(1e-5));
}

TEST_CASE("alpha at c=0 equals the expected Gaussian max-abs") {
  for (int d : {1, 2, 5, 16}) {
    const double mc = expected_max_abs_gaussian(d, 2000000, 99);
    CHECK(quad(d, 0.0).value == doctest::Approx(mc).epsilon(3e-3));
  }
}

TEST_CASE("monte carlo path agrees with quadrature") {
  const std::vector<std::pair<int, double>> cases = {
      {1, 0.7}, {2, 1.0}, {3, 0.0}, {4, 2.0}};
  for (auto [d, c] : cases) {
    AlphaQuery q;
    q.d = d;
    q.c = c;
    q.method = AlphaMethod::monte_carlo;
    q.samples_or_nodes = 1000000;
    q.seed = 31;
    AlphaResult mc = alpha(q);
    AlphaResult qd = quad(d, c);
    CHECK(std::abs(mc.value - qd.value) < 5.0 * mc.error + 1e-9);
    CHECK(mc.error > 0.0);
    CHECK(mc.error < 0.01);
  }
}

TEST_CASE("sigma rescales the effective center distance") {
  AlphaResult a = quad(3, 2.0, 2.0);
  AlphaResult b = quad(3, 1.0, 1.0);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("alpha query validation") {
  AlphaQuery q;
  q.d = 0;
  CHECK_THROWS_AS(alpha(q), std::invalid_argument);
  q.d = 2;
  q.c = -1.0;
  CHECK_THROWS_AS(alpha(q), std::invalid_argument);
  q.c = 1.0;
  q.sigma = 0.0;
  CHECK_THROWS_AS(alpha(q), std::invalid_argument);
}

TEST_CASE("gaussian max-abs expectation grows with dimension") {
  const double d1 = expected_max_abs_gaussian(1, 500000, 7);
  const double d4 = expected_max_abs_gaussian(4, 500000, 7);
  const double d16 = expected_max_abs_gaussian(16, 500000, 7);
  CHECK(d1 == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(5e-3));
  CHECK(d4 > d1 + 0.2);
  CHECK(d16 > d4 + 0.2);
}

TEST_CASE("voronoi means sit on the scaled orthoplex") {
  Eigen::MatrixXd V = voronoi_means_orthoplex(2, 1.0);
  REQUIRE(V.rows() == 2);
  REQUIRE(V.cols() == 4);
  const double a = 1.3992824567484914;
  Eigen::MatrixXd expected = a * make_orthoplex(2);
  CHECK((V - expected).cwiseAbs().maxCoeff() < 1e-3);
  CHECK(V.rowwise().sum().norm() < 1e-12);

  // Vanishing noise pins the Voronoi means to the centers themselves.
  Eigen::MatrixXd tight = voronoi_means_orthoplex(2, 1e-3);
  CHECK((tight - make_orthoplex(2)).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("experiment emits one row per centroid per trial") {
  VoronoiExperimentSpec spec;
  spec.d = 2;
  spec.sigma = 1.0;
  spec.n_per_center = 200;
  spec.trials = 3;
  spec.kmeanspp_restarts = 2;
  spec.seed = 5;
  auto rows = run_voronoi_experiment(spec);
  REQUIRE(rows.size() == 3 * 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    CHECK(row.trial == static_cast<int>(i / 4));
    CHECK(row.centroid_idx == static_cast<int>(i % 4));
    CHECK(row.n == 200);
    CHECK(row.x.size() == 2);
    CHECK(row.err_to_voronoi > 0.0);
    CHECK(row.err_to_center > 0.0);
    // Error columns are per-trial statistics, constant within the trial.
    CHECK(row.err_to_voronoi == rows[(i / 4) * 4].err_to_voronoi);
    CHECK(row.err_to_center == rows[(i / 4) * 4].err_to_center);
  }

  auto again = run_voronoi_experiment(spec);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].err_to_voronoi == again[i].err_to_voronoi);
    CHECK((rows[i].x - again[i].x).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("error to voronoi means shrinks with sample size") {
  VoronoiExperimentSpec small;
  small.d = 2;
  small.n_per_center = 100;
  small.trials = 8;
  small.kmeanspp_restarts = 5;
  small.seed = 12;
  VoronoiExperimentSpec large = small;
  large.n_per_center = 10000;

  auto med_err = [](const std::vector<VoronoiTrialRow>& rows) {
    std::vector<double> v;
    for (std::size_t i = 0; i < rows.size(); i += 4)
      v.push_back(rows[i].err_to_voronoi);
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  CHECK(med_err(run_voronoi_experiment(large)) <
        med_err(run_voronoi_experiment(small)));
}

TEST_CASE("vanishing noise recovers the gaussian centers") {
  VoronoiExperimentSpec spec;
  spec.d = 2;
  spec.sigma = 1e-3;
  spec.n_per_center = 50;
  spec.trials = 2;
  spec.kmeanspp_restarts = 5;
  spec.seed = 9;
  auto rows = run_voronoi_experiment(spec);
  for (const auto& row : rows) CHECK(row.err_to_center < 1e-2);
}

TEST_CASE("monotonicity check passes on the standard grids") {
  const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 4.0};
  for (int d : {1, 2, 3}) {
    MonotonicityReport rep = check_alpha_monotonicity(d, grid);
    CHECK(rep.ok);
    REQUIRE(rep.rows.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(rep.rows[i].d == d);
      CHECK(rep.rows[i].c == grid[i]);
      CHECK(rep.rows[i].alpha >= rep.rows[0].alpha - 1e-6);
    }
  }
}
