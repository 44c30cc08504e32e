#pragma once

#include <Eigen/Dense>

namespace spinrecon {

inline constexpr double kDefaultDeterminantFloor = 1e-6;

// y = matrix * x + offset, with x the unknown Bloch vector.
struct AffineMap {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& x) const { return matrix * x + offset; }
};

// Ratio of extreme singular values; infinity for a singular matrix.
double condition_number(const Eigen::Matrix3d& m);

// Solves matrix * x = y - offset. Throws IllConditioned when |det| <= det_floor.
Eigen::Vector3d solve_affine(const AffineMap& map, const Eigen::Vector3d& y,
                             double det_floor = kDefaultDeterminantFloor);

}  // namespace spinrecon
