#pragma once

#include "spinrecon/quantum_core.hpp"

#include <optional>

namespace spinrecon::jc {

inline constexpr int kDefaultNmax = 30;
inline constexpr double kMaxPoissonTail = 1e-8;

/// Resonant Jaynes-Cummings configuration: coupling gamma, frequency omega,
/// coherent amplitude alpha of the field, photon-series truncation n_max.
struct JCParams {
  double gamma = 0.1;
  double omega = 0.1;
  Complex alpha{1.0, 0.0};
  int n_max = kDefaultNmax;

  // Validates the parameters. An explicit n_max must keep the Poisson tail
  // below 1e-8 (TruncationError otherwise); without one, n_max starts at 30
  // and is raised until it does.
  static JCParams make(double gamma, double omega, Complex alpha,
                       std::optional<int> n_max = std::nullopt);

  double mean_photons() const { return std::norm(alpha); }
  double poisson_tail() const;
  FockSpace space() const { return FockSpace(n_max); }
};

// (<sigma_x(t)>, <a^dag a(t)>, <a^dag a sigma_x(t)>).
struct ExpectationTriple {
  double sx = 0.0;
  double n_phot = 0.0;
  double nsx = 0.0;

  Eigen::Vector3d as_vector() const { return {sx, n_phot, nsx}; }
  static ExpectationTriple from_vector(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
};

// Joint-space index for spin s (0 = |+>, 1 = |->) and photon number k; spin is the slow index.
inline Eigen::Index joint_index(int s, int k, const FockSpace& space) {
  return s * space.dim() + k;
}

}  // namespace spinrecon::jc
