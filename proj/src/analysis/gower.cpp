#include "boah/analysis/gower.hpp"

#include <cmath>

#include "boah/error.hpp"
#include "boah/kernels.hpp"

namespace boah::analysis {

double gower_distance(const DesignSpace& space, const Configuration& a, const Configuration& b) {
  const std::size_t d = space.dimension();
  if (a.size() != d || b.size() != d) throw Error(ErrorKind::SpaceMismatch, "configuration dimension differs from space");
  if (d == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const auto& va = a[j];
    const auto& vb = b[j];
    if (!va && !vb) continue;
    if (!va || !vb) {
      sum += 1.0;
      continue;
    }
    const auto& hp = space.hyperparameter(j);
    switch (hp.kind) {
      case HpKind::continuous:
      case HpKind::integer: sum += std::abs(space.encode(j, *va) - space.encode(j, *vb)); break;
      case HpKind::categorical: sum += *va == *vb ? 0.0 : 1.0; break;
      case HpKind::ordinal:
        if (hp.num_choices() > 1) sum += std::abs(*va - *vb) / static_cast<double>(hp.num_choices() - 1);
        break;
    }
  }
  return sum / static_cast<double>(d);
}

std::vector<double> gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs) {
  std::vector<double> out(configs.size() * configs.size());
  kernels::gower_matrix(space, configs, out);
  return out;
}

}  // namespace boah::analysis
