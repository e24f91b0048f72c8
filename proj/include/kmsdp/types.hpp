#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace kmsdp {

enum class ComponentKind { gaussian, uniform_ball };

struct MixtureComponent {
  Eigen::VectorXd center;
  double sigma = 1.0;  // entrywise stddev; ball radius for uniform_ball
  int n = 1;
  ComponentKind kind = ComponentKind::gaussian;
};

struct MixtureSpec {
  std::vector<MixtureComponent> components;
  std::uint64_t seed = 0;

  int dim() const;
  int component_count() const { return static_cast<int>(components.size()); }
  int total_points() const;
  double delta_min() const;  // min pairwise center distance
  double delta_max() const;
  double sigma_max() const;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PointCloud {
  Eigen::MatrixXd data;  // m x N, one point per column
  std::optional<std::vector<int>> labels;

  int dim() const { return static_cast<int>(data.rows()); }
  int count() const { return static_cast<int>(data.cols()); }

  void validate() const;
};

enum class IsogonKind { simplex, orthoplex };

struct IsogonConfig {
  IsogonKind kind = IsogonKind::simplex;
  int k = 2;
  double scale = 1.0;
};

}  // namespace kmsdp
