#include "kmsdp/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace kmsdp {

namespace {

void check_open_read(const std::ifstream& f, const std::string& path) {
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
}

void check_open_write(const std::ofstream& f, const std::string& path) {
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
}

double parse_double(const std::string& token, const std::string& context) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("bad number '" + token + "' in " + context);
  return v;
}

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

MixtureSpec mixture_spec_from_json(const nlohmann::json& j) {
  MixtureSpec spec;
  if (!j.is_object()) throw std::invalid_argument("mixture spec: not a JSON object");
  if (j.contains("seed")) {
    if (!j["seed"].is_number())
      throw std::invalid_argument("mixture spec: seed must be a number");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("components") || !j["components"].is_array())
    throw std::invalid_argument("mixture spec: components array missing");
  int idx = 0;
  for (const auto& cj : j["components"]) {
    const std::string where = "components[" + std::to_string(idx) + "]";
    MixtureComponent comp;
    if (!cj.contains("center") || !cj["center"].is_array())
      throw std::invalid_argument("mixture spec: " + where + ".center missing");
    comp.center.resize(cj["center"].size());
    int r = 0;
    for (const auto& x : cj["center"]) {
      if (!x.is_number())
        throw std::invalid_argument("mixture spec: " + where + ".center entry not a number");
      comp.center(r++) = x.get<double>();
    }
    if (!cj.contains("sigma") || !cj["sigma"].is_number())
      throw std::invalid_argument("mixture spec: " + where + ".sigma missing");
    comp.sigma = cj["sigma"].get<double>();
    if (!cj.contains("n") || !cj["n"].is_number_integer())
      throw std::invalid_argument("mixture spec: " + where + ".n missing");
    comp.n = cj["n"].get<int>();
    if (cj.contains("kind")) {
      const std::string kind = cj["kind"].get<std::string>();
      if (kind == "gaussian")
        comp.kind = ComponentKind::gaussian;
      else if (kind == "uniform_ball")
        comp.kind = ComponentKind::uniform_ball;
      else
        throw std::invalid_argument("mixture spec: " + where + ".kind unknown: " + kind);
    }
    spec.components.push_back(std::move(comp));
    ++idx;
  }
  spec.validate();
  return spec;
}

nlohmann::json mixture_spec_to_json(const MixtureSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["components"] = nlohmann::json::array();
  for (const auto& comp : spec.components) {
    nlohmann::json cj;
    cj["center"] = std::vector<double>(comp.center.data(),
                                       comp.center.data() + comp.center.size());
    cj["sigma"] = comp.sigma;
    cj["n"] = comp.n;
    cj["kind"] = comp.kind == ComponentKind::gaussian ? "gaussian" : "uniform_ball";
    j["components"].push_back(std::move(cj));
  }
  return j;
}

MixtureSpec read_mixture_spec(const std::string& path) {
  std::ifstream f(path);
  check_open_read(f, path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("mixture spec: JSON parse error in " + path +
                                ": " + e.what());
  }
  return mixture_spec_from_json(j);
}

void write_point_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream f(path);
  check_open_write(f, path);
  const int m = cloud.dim();
  for (int r = 0; r < m; ++r) f << (r ? ",x" : "x") << r;
  if (cloud.labels) f << ",label";
  f << "\n";
  for (int i = 0; i < cloud.count(); ++i) {
    for (int r = 0; r < m; ++r) {
      if (r) f << ',';
      f << format_double(cloud.data(r, i));
    }
    if (cloud.labels) f << ',' << (*cloud.labels)[i];
    f << "\n";
  }
}

PointCloud read_point_cloud_csv(const std::string& path) {
  std::ifstream f(path);
  check_open_read(f, path);
  std::string line;
  if (!std::getline(f, line))
    throw std::invalid_argument("point cloud csv: empty file: " + path);
  auto header = split_csv_line(line);
  bool has_label = !header.empty() && header.back() == "label";
  const int m = static_cast<int>(header.size()) - (has_label ? 1 : 0);
  if (m < 1) throw std::invalid_argument("point cloud csv: no coordinate columns");
  for (int r = 0; r < m; ++r)
    if (header[r] != "x" + std::to_string(r))
      throw std::invalid_argument("point cloud csv: unexpected header column '" +
                               header[r] + "'");

  std::vector<std::vector<double>> coords;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto tokens = split_csv_line(line);
    if (static_cast<int>(tokens.size()) != m + (has_label ? 1 : 0))
      throw std::invalid_argument("point cloud csv: wrong column count at line " +
                               std::to_string(line_no));
    std::vector<double> row(m);
    for (int r = 0; r < m; ++r)
      row[r] = parse_double(tokens[r], "line " + std::to_string(line_no));
    coords.push_back(std::move(row));
    if (has_label)
      labels.push_back(static_cast<int>(
          parse_double(tokens[m], "line " + std::to_string(line_no))));
  }
  if (coords.empty())
    throw std::invalid_argument("point cloud csv: no data rows in " + path);

  PointCloud cloud;
  cloud.data.resize(m, static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (int r = 0; r < m; ++r) cloud.data(r, static_cast<int>(i)) = coords[i][r];
  if (has_label) cloud.labels = std::move(labels);
  cloud.validate();
  return cloud;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M) {
  std::ofstream f(path);
  check_open_write(f, path);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) f << ',';
      f << format_double(M(i, j));
    }
    f << "\n";
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  check_open_read(f, path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto tokens = split_csv_line(line);
    std::vector<double> row;
    row.reserve(tokens.size());
    for (const auto& tok : tokens)
      row.push_back(parse_double(tok, "line " + std::to_string(line_no)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("matrix csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix csv: empty file: " + path);
  Eigen::MatrixXd M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return M;
}

nlohmann::json clustering_result_to_json(const ClusteringResult& result) {
  nlohmann::json j;
  j["centers"] = nlohmann::json::array();
  for (Eigen::Index t = 0; t < result.centers.cols(); ++t) {
    std::vector<double> c(result.centers.col(t).data(),
                          result.centers.col(t).data() + result.centers.rows());
    j["centers"].push_back(c);
  }
  j["assignment"] = result.assignment;
  j["kmeans_value"] = result.kmeans_value;
  if (result.certificate)
    j["certificate"] = *result.certificate;
  else
    j["certificate"] = nullptr;
  return j;
}

nlohmann::json eval_report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["kmeans_value"] = report.kmeans_value;
  j["lifted_value"] = report.lifted_value;
  j["sdp_certificate"] =
      report.sdp_certificate ? nlohmann::json(*report.sdp_certificate)
                             : nlohmann::json(nullptr);
  j["misclassification_rate"] =
      report.misclassification_rate
          ? nlohmann::json(*report.misclassification_rate)
          : nlohmann::json(nullptr);
  j["center_error_max"] = report.center_error_max
                              ? nlohmann::json(*report.center_error_max)
                              : nlohmann::json(nullptr);
  j["center_error_mse"] = report.center_error_mse
                              ? nlohmann::json(*report.center_error_mse)
                              : nlohmann::json(nullptr);
  return j;
}

void write_trial_table_csv(const std::string& path,
                           const std::vector<VoronoiTrialRow>& rows) {
  std::ofstream f(path);
  check_open_write(f, path);
  const int m = rows.empty() ? 0 : static_cast<int>(rows.front().x.size());
  f << "trial,n,centroid_idx";
  for (int r = 0; r < m; ++r) f << ",x" << r;
  f << ",err_to_voronoi,err_to_center\n";
  for (const auto& row : rows) {
    f << row.trial << ',' << row.n << ',' << row.centroid_idx;
    for (int r = 0; r < m; ++r) f << ',' << format_double(row.x(r));
    f << ',' << format_double(row.err_to_voronoi) << ','
      << format_double(row.err_to_center) << "\n";
  }
}

void write_alpha_table_csv(const std::string& path,
                           const std::vector<AlphaTableRow>& rows) {
  std::ofstream f(path);
  check_open_write(f, path);
  f << "d,c,alpha,err\n";
  for (const auto& row : rows) {
    f << row.d << ',' << format_double(row.c) << ','
      << format_double(row.alpha) << ',' << format_double(row.err) << "\n";
  }
}

}  // namespace kmsdp
