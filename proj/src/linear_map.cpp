#include "spinrecon/linear_map.hpp"

#include "spinrecon/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spinrecon {

double condition_number(const Eigen::Matrix3d& m) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const auto& s = svd.singularValues();
  if (s[2] == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / s[2];
}

Eigen::Vector3d solve_affine(const AffineMap& map, const Eigen::Vector3d& y, double det_floor) {
  const double det = map.matrix.determinant();
  if (!(std::abs(det) > det_floor)) {
    throw IllConditioned("reconstruction map is ill-conditioned: |det| = " +
                             std::to_string(std::abs(det)) + " <= floor " +
                             std::to_string(det_floor),
                         det);
  }
  return map.matrix.partialPivLu().solve(y - map.offset);
}

}  // namespace spinrecon
