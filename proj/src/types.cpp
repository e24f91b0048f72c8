#include "kmsdp/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kmsdp {

int MixtureSpec::dim() const {
  if (components.empty()) return 0;
  return static_cast<int>(components.front().center.size());
}

int MixtureSpec::total_points() const {
  int total = 0;
  for (const auto& c : components) total += c.n;
  return total;
}

double MixtureSpec::delta_min() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < components.size(); ++a)
    for (std::size_t b = a + 1; b < components.size(); ++b)
      best = std::min(best, (components[a].center - components[b].center).norm());
  return best;
}

double MixtureSpec::delta_max() const {
  double best = 0.0;
  for (std::size_t a = 0; a < components.size(); ++a)
    for (std::size_t b = a + 1; b < components.size(); ++b)
      best = std::max(best, (components[a].center - components[b].center).norm());
  return best;
}

double MixtureSpec::sigma_max() const {
  double best = 0.0;
  for (const auto& c : components) best = std::max(best, c.sigma);
  return best;
}

void MixtureSpec::validate() const {
  if (components.empty())
    throw std::invalid_argument("MixtureSpec.components: at least one component required");
  const Eigen::Index m = components.front().center.size();
  if (m < 1)
    throw std::invalid_argument("MixtureSpec.components[0].center: dimension must be >= 1");
  for (std::size_t t = 0; t < components.size(); ++t) {
    const auto& c = components[t];
    const std::string where = "MixtureSpec.components[" + std::to_string(t) + "]";
    if (c.center.size() != m)
      throw std::invalid_argument(where + ".center: dimension mismatch");
    if (!c.center.allFinite())
      throw std::invalid_argument(where + ".center: non-finite entry");
    if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma))
      throw std::invalid_argument(where + ".sigma: must be finite and nonnegative");
    if (c.n < 1)
      throw std::invalid_argument(where + ".n: must be a positive count");
  }
}

void PointCloud::validate() const {
  if (!data.allFinite())
    throw std::invalid_argument("PointCloud.data: non-finite entry");
  if (labels && static_cast<int>(labels->size()) != count())
    throw std::invalid_argument("PointCloud.labels: size differs from column count");
}

}  // namespace kmsdp
