#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmsdp/distance.hpp"
#include "kmsdp/evaluation.hpp"
#include "kmsdp/io.hpp"
#include "kmsdp/mixture.hpp"
#include "kmsdp/parallel.hpp"
#include "kmsdp/postprocess.hpp"
#include "kmsdp/reference.hpp"
#include "kmsdp/rng.hpp"
#include "kmsdp/sdp.hpp"
#include "kmsdp/voronoi.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string input;
  std::string output_dir = ".";
  std::string manifest_path;
  std::uint64_t seed = 0;
  int k = 2;
  kmsdp::SolverConfig solver;
  double epsilon = 0.0;  // 0 selects the data-driven default
  std::string round = "ball";
  int trials = 1;
  int restarts = 10;
  std::string method = "quadrature";
  int d = 2;
  double c = 0.0;
  double sigma = 1.0;
  int n = 100;
  int m = 2;
  std::int64_t samples = 0;
  std::vector<double> deltas = {20.0};
  std::string grid;
  bool emit_denoised = false;
};

// Tracks which options the user actually passed so manifest values only
// fill the gaps (precedence: CLI flag > manifest > default).
struct FlagBook {
  std::map<std::string, CLI::Option*> flags;

  CLI::Option* track(const std::string& key, CLI::Option* opt) {
    flags[key] = opt;
    return opt;
  }

  bool overridable(const std::string& key) const {
    auto it = flags.find(key);
    return it != flags.end() && it->second->count() == 0;
  }
};

template <typename T>
void apply_manifest_value(const json& manifest, const FlagBook& book,
                          const std::string& key, T& target) {
  if (manifest.contains(key) && book.overridable(key))
    target = manifest.at(key).get<T>();
}

void apply_manifest(const json& manifest, const FlagBook& book,
                    const std::string& command, Options& opt) {
  if (!manifest.is_object())
    throw std::invalid_argument("manifest: not a JSON object");
  if (manifest.contains("command") &&
      manifest.at("command").get<std::string>() != command)
    throw std::invalid_argument("manifest: command mismatch with subcommand '" +
                                command + "'");
  apply_manifest_value(manifest, book, "input", opt.input);
  apply_manifest_value(manifest, book, "output_dir", opt.output_dir);
  apply_manifest_value(manifest, book, "seed", opt.seed);
  apply_manifest_value(manifest, book, "k", opt.k);
  apply_manifest_value(manifest, book, "tol", opt.solver.tol);
  apply_manifest_value(manifest, book, "max_iter", opt.solver.max_iter);
  apply_manifest_value(manifest, book, "rho", opt.solver.rho);
  apply_manifest_value(manifest, book, "over_relax", opt.solver.over_relaxation);
  apply_manifest_value(manifest, book, "epsilon", opt.epsilon);
  apply_manifest_value(manifest, book, "round", opt.round);
  apply_manifest_value(manifest, book, "trials", opt.trials);
  apply_manifest_value(manifest, book, "restarts", opt.restarts);
  apply_manifest_value(manifest, book, "method", opt.method);
  apply_manifest_value(manifest, book, "d", opt.d);
  apply_manifest_value(manifest, book, "c", opt.c);
  apply_manifest_value(manifest, book, "sigma", opt.sigma);
  apply_manifest_value(manifest, book, "n", opt.n);
  apply_manifest_value(manifest, book, "m", opt.m);
  apply_manifest_value(manifest, book, "samples", opt.samples);
  apply_manifest_value(manifest, book, "deltas", opt.deltas);
  apply_manifest_value(manifest, book, "grid", opt.grid);
  apply_manifest_value(manifest, book, "emit_denoised", opt.emit_denoised);
}

void load_manifest(const FlagBook& book, const std::string& command,
                   Options& opt) {
  if (opt.manifest_path.empty()) return;
  std::ifstream f(opt.manifest_path);
  if (!f) throw std::runtime_error("cannot open manifest: " + opt.manifest_path);
  json manifest;
  try {
    f >> manifest;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest: JSON parse error: ") +
                                e.what());
  }
  apply_manifest(manifest, book, command, opt);
}

std::string output_path(const Options& opt, const std::string& name) {
  std::filesystem::create_directories(opt.output_dir);
  return (std::filesystem::path(opt.output_dir) / name).string();
}

kmsdp::AlphaMethod parse_method(const std::string& method) {
  if (method == "quadrature") return kmsdp::AlphaMethod::quadrature;
  if (method == "mc" || method == "monte_carlo")
    return kmsdp::AlphaMethod::monte_carlo;
  throw std::invalid_argument("method: expected 'quadrature' or 'mc', got '" +
                              method + "'");
}

std::vector<double> parse_grid(const std::string& grid) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= grid.size()) {
    std::size_t pos = grid.find(',', start);
    std::string tok = grid.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw std::invalid_argument("grid: no values parsed");
  return out;
}

int cmd_generate(const Options& opt) {
  if (opt.input.empty())
    throw std::invalid_argument("generate: --input mixture spec JSON required");
  kmsdp::MixtureSpec spec = kmsdp::read_mixture_spec(opt.input);
  kmsdp::PointCloud cloud = kmsdp::sample_mixture(spec);
  const std::string path = output_path(opt, "points.csv");
  kmsdp::write_point_cloud_csv(path, cloud);

  json summary;
  summary["N"] = cloud.count();
  summary["m"] = cloud.dim();
  summary["k"] = spec.component_count();
  summary["delta_min"] = spec.component_count() > 1 ? json(spec.delta_min())
                                                    : json(nullptr);
  summary["sigma_max"] = spec.sigma_max();
  summary["path"] = path;
  std::cout << summary.dump() << "\n";
  return 0;
}

// Rounding radius when none is given: a tenth of the smallest gap among the
// k most popular denoised locations.
double default_epsilon(const kmsdp::DenoisedCloud& den, int k) {
  Eigen::MatrixXd pops = kmsdp::popular_locations(den, k);
  double gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      gap = std::min(gap, (pops.col(a) - pops.col(b)).norm());
  if (!std::isfinite(gap) || gap <= 0.0)
    throw std::runtime_error("cluster: cannot infer epsilon; pass --epsilon");
  return gap / 10.0;
}

int cmd_cluster(const Options& opt) {
  if (opt.input.empty())
    throw std::invalid_argument("cluster: --input points CSV required");
  if (opt.k < 1) throw std::invalid_argument("cluster: k must be >= 1");

  kmsdp::PointCloud cloud = kmsdp::read_point_cloud_csv(opt.input);
  kmsdp::DistanceMatrix D = kmsdp::squared_distance_matrix(cloud);
  kmsdp::SdpSolution sol = kmsdp::solve_kmeans_sdp(D, opt.k, opt.solver);

  kmsdp::DenoisedCloud den = kmsdp::denoise(cloud, sol);
  Eigen::MatrixXd centers;
  if (opt.round == "ball") {
    kmsdp::RoundingConfig rcfg;
    rcfg.k = opt.k;
    rcfg.epsilon = opt.epsilon > 0.0 ? opt.epsilon : default_epsilon(den, opt.k);
    centers = kmsdp::ball_rounding(den, rcfg);
  } else if (opt.round == "popular") {
    centers = kmsdp::popular_locations(den, opt.k);
  } else {
    throw std::invalid_argument("cluster: --round must be 'ball' or 'popular'");
  }

  kmsdp::ClusteringResult result = kmsdp::assign_points(cloud, centers);
  result.certificate = 0.5 * sol.objective;

  kmsdp::EvalReport report;
  report.kmeans_value = result.kmeans_value;
  kmsdp::Partition partition =
      kmsdp::partition_from_labels(result.assignment, opt.k);
  report.lifted_value = kmsdp::lifted_value(D, partition);
  report.sdp_certificate = result.certificate;
  if (cloud.labels) {
    int max_label = *std::max_element(cloud.labels->begin(), cloud.labels->end());
    const int k_conf = std::max(opt.k, max_label + 1);
    report.misclassification_rate =
        kmsdp::misclassification_rate(result.assignment, *cloud.labels, k_conf)
            .rate;
  }

  kmsdp::write_matrix_csv(output_path(opt, "solution_matrix.csv"), sol.X);
  if (opt.emit_denoised) {
    kmsdp::PointCloud den_cloud;
    den_cloud.data = den.columns;
    den_cloud.labels = cloud.labels;
    kmsdp::write_point_cloud_csv(output_path(opt, "denoised.csv"), den_cloud);
  }
  {
    std::ofstream f(output_path(opt, "result.json"));
    f << kmsdp::clustering_result_to_json(result).dump(2) << "\n";
  }
  {
    std::ofstream f(output_path(opt, "report.json"));
    f << kmsdp::eval_report_to_json(report).dump(2) << "\n";
  }

  json out;
  out["result"] = kmsdp::clustering_result_to_json(result);
  out["report"] = kmsdp::eval_report_to_json(report);
  json solver_info;
  solver_info["status"] = sol.status == kmsdp::SolverStatus::converged
                              ? "converged"
                              : (sol.status == kmsdp::SolverStatus::max_iter
                                     ? "max_iter"
                                     : "numerical_failure");
  solver_info["iterations"] = sol.iterations;
  json residuals;
  residuals["trace_gap"] = sol.primal_residuals.trace_gap;
  residuals["rowsum_gap"] = sol.primal_residuals.rowsum_gap;
  residuals["neg_entry"] = sol.primal_residuals.neg_entry;
  residuals["neg_eig"] = sol.primal_residuals.neg_eig;
  solver_info["residuals"] = residuals;
  out["solver"] = solver_info;
  std::cout << out.dump() << "\n";

  if (sol.status != kmsdp::SolverStatus::converged) {
    json err;
    err["error"] = "solver did not converge";
    err["status"] = solver_info["status"];
    std::cerr << err.dump() << "\n";
    return 3;
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  if (opt.k < 2) throw std::invalid_argument("sweep: k must be >= 2");
  if (opt.m < opt.k - 1)
    throw std::invalid_argument("sweep: need m >= k-1 for simplex centers");
  if (opt.n < 1 || opt.trials < 1)
    throw std::invalid_argument("sweep: n and trials must be >= 1");
  if (!(opt.sigma > 0.0)) throw std::invalid_argument("sweep: sigma must be positive");

  const double kd = static_cast<double>(opt.k);
  // Unit simplex columns sit sqrt(2k/(k-1)) apart; rescale so the pairwise
  // separation equals delta * sigma.
  const Eigen::MatrixXd simplex = kmsdp::make_simplex(opt.k, opt.m);
  const double unit_gap = std::sqrt(2.0 * kd / (kd - 1.0));

  struct Row {
    double delta = 0.0;
    double denoise_mse = 0.0;
    double raw_mse = 0.0;
    double center_err = 0.0;
    double misclass = 0.0;
    bool converged = true;
  };
  std::vector<Row> rows(opt.deltas.size());

  for (std::size_t gi = 0; gi < opt.deltas.size(); ++gi) {
    const double delta = opt.deltas[gi];
    const Eigen::MatrixXd centers =
        simplex * (delta * opt.sigma / unit_gap);

    std::vector<Row> trial_rows(opt.trials);
    kmsdp::parallel_for(opt.trials, [&](int trial) {
      kmsdp::MixtureSpec ms;
      ms.seed = kmsdp::derive_stream(opt.seed, gi * 100003ull + trial);
      for (int t = 0; t < opt.k; ++t) {
        kmsdp::MixtureComponent comp;
        comp.center = centers.col(t);
        comp.sigma = opt.sigma;
        comp.n = opt.n;
        ms.components.push_back(std::move(comp));
      }
      const kmsdp::PointCloud cloud = kmsdp::sample_mixture(ms);
      const kmsdp::DistanceMatrix D = kmsdp::squared_distance_matrix(cloud);
      const kmsdp::SdpSolution sol = kmsdp::solve_kmeans_sdp(D, opt.k, opt.solver);
      const kmsdp::DenoisedCloud den = kmsdp::denoise(cloud, sol);

      // Empirical centroids of the labeled groups of raw points.
      Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(opt.m, opt.k);
      std::vector<int> counts(opt.k, 0);
      const auto& labels = *cloud.labels;
      for (int i = 0; i < cloud.count(); ++i) {
        centroids.col(labels[i]) += cloud.data.col(i);
        counts[labels[i]] += 1;
      }
      for (int t = 0; t < opt.k; ++t) centroids.col(t) /= counts[t];

      double dmse = 0.0, rmse = 0.0;
      for (int i = 0; i < cloud.count(); ++i) {
        dmse += (den.columns.col(i) - centroids.col(labels[i])).squaredNorm();
        rmse += (cloud.data.col(i) - centroids.col(labels[i])).squaredNorm();
      }
      dmse /= cloud.count();
      rmse /= cloud.count();

      Eigen::MatrixXd est;
      if (opt.round == "popular") {
        est = kmsdp::popular_locations(den, opt.k);
      } else {
        kmsdp::RoundingConfig rcfg;
        rcfg.k = opt.k;
        rcfg.epsilon =
            opt.epsilon > 0.0 ? opt.epsilon : default_epsilon(den, opt.k);
        est = kmsdp::ball_rounding(den, rcfg);
      }
      const kmsdp::ClusteringResult res = kmsdp::assign_points(cloud, est);

      Row row;
      row.delta = delta;
      row.denoise_mse = dmse;
      row.raw_mse = rmse;
      row.center_err = kmsdp::center_error(est, centers).max_err;
      row.misclass =
          kmsdp::misclassification_rate(res.assignment, labels, opt.k).rate;
      row.converged = sol.status == kmsdp::SolverStatus::converged;
      trial_rows[trial] = row;
    });

    Row mean;
    mean.delta = delta;
    for (const auto& tr : trial_rows) {
      mean.denoise_mse += tr.denoise_mse / opt.trials;
      mean.raw_mse += tr.raw_mse / opt.trials;
      mean.center_err += tr.center_err / opt.trials;
      mean.misclass += tr.misclass / opt.trials;
      mean.converged = mean.converged && tr.converged;
    }
    rows[gi] = mean;
  }

  const std::string path = output_path(opt, "sweep.csv");
  {
    std::ofstream f(path);
    f << "delta_over_sigma,denoise_mse,raw_mse,center_err,misclass_rate\n";
    for (const auto& row : rows) {
      f << kmsdp::format_double(row.delta) << ','
        << kmsdp::format_double(row.denoise_mse) << ','
        << kmsdp::format_double(row.raw_mse) << ','
        << kmsdp::format_double(row.center_err) << ','
        << kmsdp::format_double(row.misclass) << "\n";
    }
  }

  bool all_converged = true;
  json summary = json::array();
  for (const auto& row : rows) {
    json r;
    r["delta_over_sigma"] = row.delta;
    r["denoise_mse"] = row.denoise_mse;
    r["raw_mse"] = row.raw_mse;
    r["center_err"] = row.center_err;
    r["misclass_rate"] = row.misclass;
    summary.push_back(r);
    all_converged = all_converged && row.converged;
  }
  json out;
  out["rows"] = summary;
  out["path"] = path;
  std::cout << out.dump() << "\n";

  if (!all_converged) {
    json err;
    err["error"] = "solver did not converge on some trials";
    std::cerr << err.dump() << "\n";
    return 3;
  }
  return 0;
}

int cmd_voronoi(const Options& opt) {
  kmsdp::VoronoiExperimentSpec spec;
  spec.d = opt.d;
  spec.sigma = opt.sigma;
  spec.n_per_center = opt.n;
  spec.trials = opt.trials;
  spec.kmeanspp_restarts = opt.restarts;
  spec.seed = opt.seed;

  const std::vector<kmsdp::VoronoiTrialRow> rows =
      kmsdp::run_voronoi_experiment(spec);
  const std::string path = output_path(opt, "trials.csv");
  kmsdp::write_trial_table_csv(path, rows);

  const int k = 2 * spec.d;
  std::vector<double> err_v, err_c;
  for (std::size_t i = 0; i < rows.size(); i += k) {
    err_v.push_back(rows[i].err_to_voronoi);
    err_c.push_back(rows[i].err_to_center);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  json out;
  out["trials"] = spec.trials;
  out["median_err_to_voronoi"] = median(err_v);
  out["median_err_to_center"] = median(err_c);
  out["path"] = path;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_alpha(const Options& opt) {
  const kmsdp::AlphaMethod method = parse_method(opt.method);
  if (!opt.grid.empty()) {
    const std::vector<double> grid = parse_grid(opt.grid);
    const kmsdp::MonotonicityReport report =
        kmsdp::check_alpha_monotonicity(opt.d, grid);
    const std::string path = output_path(opt, "alpha.csv");
    kmsdp::write_alpha_table_csv(path, report.rows);
    json out;
    out["d"] = opt.d;
    out["monotone_from_zero"] = report.ok;
    out["path"] = path;
    std::cout << out.dump() << "\n";
    return 0;
  }

  kmsdp::AlphaQuery query;
  query.d = opt.d;
  query.c = opt.c;
  query.sigma = opt.sigma;
  query.method = method;
  query.samples_or_nodes = opt.samples;
  query.seed = opt.seed;
  const kmsdp::AlphaResult r = kmsdp::alpha(query);

  json out;
  out["d"] = opt.d;
  out["c"] = opt.c;
  out["sigma"] = opt.sigma;
  out["method"] = opt.method;
  out["alpha"] = r.value;
  out["err"] = r.error;
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Relax-and-round k-means clustering via semidefinite relaxation, with "
      "a numerical laboratory for Voronoi-mean experiments.\n"
      "Config precedence: CLI flag > --manifest JSON > built-in default."};
  app.require_subcommand(1);

  Options opt;
  std::map<std::string, FlagBook> books;

  auto add_common = [&](CLI::App* sub) {
    FlagBook& book = books[sub->get_name()];
    book.track("output_dir",
               sub->add_option("--output-dir", opt.output_dir,
                               "Directory for output files"));
    book.track("seed", sub->add_option("--seed", opt.seed, "Master RNG seed"));
    sub->add_option("--manifest", opt.manifest_path,
                    "JSON manifest supplying defaults for unset flags");
  };
  auto add_solver = [&](CLI::App* sub) {
    FlagBook& book = books[sub->get_name()];
    book.track("tol", sub->add_option("--tol", opt.solver.tol,
                                      "Solver tolerance (default 1e-6)"));
    book.track("max_iter", sub->add_option("--max-iter", opt.solver.max_iter,
                                           "Solver iteration cap"));
    book.track("rho", sub->add_option("--rho", opt.solver.rho,
                                      "Initial penalty parameter"));
    book.track("over_relax",
               sub->add_option("--over-relax", opt.solver.over_relaxation,
                               "Over-relaxation factor in [1,2)"));
  };

  CLI::App* generate =
      app.add_subcommand("generate", "Sample a mixture spec into a points CSV");
  {
    FlagBook& book = books["generate"];
    book.track("input", generate->add_option("--input", opt.input,
                                             "Mixture spec JSON path"));
    add_common(generate);
  }

  CLI::App* cluster = app.add_subcommand(
      "cluster", "Relax-and-round pipeline: SDP, denoise, round, assign");
  {
    FlagBook& book = books["cluster"];
    book.track("input", cluster->add_option("--input", opt.input,
                                            "Points CSV path"));
    book.track("k", cluster->add_option("--k", opt.k, "Cluster count"));
    book.track("epsilon",
               cluster->add_option("--epsilon", opt.epsilon,
                                   "Rounding ball radius (0 = auto)"));
    book.track("round", cluster->add_option("--round", opt.round,
                                            "Rounding scheme: ball | popular"));
    book.track("emit_denoised",
               cluster->add_flag("--emit-denoised", opt.emit_denoised,
                                 "Also write denoised columns CSV"));
    add_common(cluster);
    add_solver(cluster);
  }

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Separation sweep: denoising quality and recovery metrics");
  {
    FlagBook& book = books["sweep"];
    book.track("deltas",
               sweep->add_option("--deltas", opt.deltas,
                                 "Separation grid in sigma units")
                   ->delimiter(','));
    book.track("k", sweep->add_option("--k", opt.k, "Cluster count"));
    book.track("m", sweep->add_option("--m", opt.m, "Ambient dimension"));
    book.track("n", sweep->add_option("--n", opt.n, "Points per cluster"));
    book.track("sigma", sweep->add_option("--sigma", opt.sigma,
                                          "Component noise level"));
    book.track("trials", sweep->add_option("--trials", opt.trials,
                                           "Trials per grid point"));
    book.track("epsilon",
               sweep->add_option("--epsilon", opt.epsilon,
                                 "Rounding ball radius (0 = auto)"));
    book.track("round", sweep->add_option("--round", opt.round,
                                          "Rounding scheme: ball | popular"));
    add_common(sweep);
    add_solver(sweep);
  }

  CLI::App* voronoi = app.add_subcommand(
      "voronoi", "Orthoplex mixture experiment: centroids vs Voronoi means");
  {
    FlagBook& book = books["voronoi"];
    book.track("d", voronoi->add_option("--d", opt.d, "Orthoplex dimension"));
    book.track("sigma", voronoi->add_option("--sigma", opt.sigma,
                                            "Component noise level"));
    book.track("n", voronoi->add_option("--n", opt.n, "Points per center"));
    book.track("trials",
               voronoi->add_option("--trials", opt.trials, "Trial count"));
    book.track("restarts", voronoi->add_option("--restarts", opt.restarts,
                                               "k-means++ restarts per trial"));
    add_common(voronoi);
  }

  CLI::App* alpha = app.add_subcommand(
      "alpha", "Evaluate the Voronoi-mean coefficient alpha_d(c/sigma)");
  {
    FlagBook& book = books["alpha"];
    book.track("d", alpha->add_option("--d", opt.d, "Orthoplex dimension"));
    book.track("c", alpha->add_option("--c", opt.c, "Center scale"));
    book.track("sigma", alpha->add_option("--sigma", opt.sigma,
                                          "Noise level (alpha at c/sigma)"));
    book.track("method", alpha->add_option("--method", opt.method,
                                           "quadrature | mc"));
    book.track("samples",
               alpha->add_option("--samples", opt.samples,
                                 "MC samples or quadrature depth (0 = default)"));
    book.track("grid",
               alpha->add_option("--grid", opt.grid,
                                 "Comma-separated c grid; runs the "
                                 "monotonicity check and writes alpha.csv"));
    add_common(alpha);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    load_manifest(books[name], name, opt);
    if (name == "generate") return cmd_generate(opt);
    if (name == "cluster") return cmd_cluster(opt);
    if (name == "sweep") return cmd_sweep(opt);
    if (name == "voronoi") return cmd_voronoi(opt);
    if (name == "alpha") return cmd_alpha(opt);
    throw std::logic_error("unhandled subcommand: " + name);
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
