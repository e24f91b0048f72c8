#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kmsdp/evaluation.hpp"
#include "kmsdp/postprocess.hpp"
#include "kmsdp/types.hpp"
#include "kmsdp/voronoi.hpp"

namespace kmsdp {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

MixtureSpec mixture_spec_from_json(const nlohmann::json& j);
nlohmann::json mixture_spec_to_json(const MixtureSpec& spec);
MixtureSpec read_mixture_spec(const std::string& path);

// Header x0,...,x{m-1}[,label]; one row per point.
void write_point_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_point_cloud_csv(const std::string& path);

// Dense row-major CSV, no header, full round-trip precision.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

nlohmann::json clustering_result_to_json(const ClusteringResult& result);
nlohmann::json eval_report_to_json(const EvalReport& report);

void write_trial_table_csv(const std::string& path,
                           const std::vector<VoronoiTrialRow>& rows);
void write_alpha_table_csv(const std::string& path,
                           const std::vector<AlphaTableRow>& rows);

}  // namespace kmsdp
