#pragma once

#include "spinrecon/jc_model.hpp"
#include "spinrecon/linear_map.hpp"

#include <span>
#include <vector>

namespace spinrecon::jc {

/// Dressed-basis quantities for excitation index n at time t:
///   f+-_n = exp(i(+-gamma sqrt(n) - omega) t)
///   S_n   = i sin(gamma sqrt(n+1) t) / sqrt(n+1)
///   g+-_n = cos(gamma sqrt(n+1) t) +- sqrt(n) S_n
struct DressedCoefficients {
  int n = 0;
  Complex f_plus;
  Complex f_minus;
  Complex s;
  Complex g_plus;
  Complex g_minus;
};

DressedCoefficients coefficients(int n, double t, const JCParams& params);

// Eigenvectors of V = sigma_+ a + sigma_- a^dag on the truncated joint space:
// phi_n^+- = (|n-1>|+> +- |n>|->)/sqrt2 for 1 <= n <= n_max, phi_0 = |0>|->,
// plus the edge state |n_max>|+> whose partner |n_max+1>|-> is cut off.
struct DressedState {
  int n = 0;
  int sign = 0;        // +1, -1, or 0 for phi_0 and the edge state
  bool edge = false;
  Vector state;
};
std::vector<DressedState> dressed_basis(const FockSpace& space);

// Reference 3x3 coefficient block A_ij(n) with the A12 and A22 entries in
// their erroneous form (columns lambda1, lambda2, lambda2*). Kept so tests can
// pin the discrepancy; use corrected_term for physics. Requires alpha != 0.
Eigen::Matrix3cd uncorrected_A(int n, double t, const JCParams& params);

/// Per-n term of the exact Poisson series
///   <O(t)> = sum_n p_n [offset(n) + A(n) (lambda1, lambda2, lambda2*)^T]
/// with p_n = e^{-|a|^2}|a|^{2n}/n!, lambda1 = (1 + <sigma_z(0)>)/2,
/// lambda2 = <sigma_+(0)>, rows <sigma_+>, <a^dag a>, <a^dag a sigma_+>.
/// Relative to uncorrected_A, A12 carries alpha*/alpha instead of i/alpha and
/// A22 is i alpha sin(gamma sqrt(n+1) t) cos(gamma sqrt(n+1) t)/sqrt(n+1).
/// Rows 2 and 3 are rewritten with n p_n = |a|^2 p_{n-1}, which moves the
/// truncation error to higher n.
struct SeriesTerm {
  Eigen::Matrix3cd lambda;
  Eigen::Vector3cd offset;
};
SeriesTerm corrected_term(int n, double t, const JCParams& params);

// The same term in Bloch coordinates: rows sx, n_phot, nsx; columns
// <sigma_x(0)>, <sigma_y(0)>, <sigma_z(0)>.
struct BlochTerm {
  Eigen::Matrix3d matrix;
  Eigen::Vector3d offset;
};
BlochTerm bloch_term(int n, double t, const JCParams& params);

/// (sx, n_phot, nsx)(t) = M x + b with x the initial Bloch vector.
struct ReconstructionSystem {
  AffineMap map;
  double t = 0.0;
  JCParams params;
  double determinant = 0.0;

  const Eigen::Matrix3d& M() const { return map.matrix; }
  const Eigen::Vector3d& b() const { return map.offset; }
};

ReconstructionSystem analytic_M(double t, const JCParams& params);

// sum_{l,m,n} p_l p_m p_n eps_ijk M_1i(l) M_2j(m) M_3k(n); equals det M by multilinearity.
double triple_sum_determinant(double t, const JCParams& params);

std::vector<double> determinant_series(const JCParams& params, std::span<const double> times);

// Direct evaluation of the closed forms in f, g, S notation.
ExpectationTriple expectations_analytic(double t, const JCParams& params, const BlochVector& rho0);

struct InitialReconstruction {
  BlochVector rho;
  double condition_number = 0.0;
  double determinant = 0.0;
};

InitialReconstruction reconstruct_initial(const ExpectationTriple& y,
                                          const ReconstructionSystem& system,
                                          double det_floor = kDefaultDeterminantFloor);

enum class Triplet { sigma_x, sigma_z };

struct RankReport {
  Triplet triplet = Triplet::sigma_x;
  Eigen::Matrix3d sensitivity;
  Eigen::Vector3d singular_values;
  int rank = 0;
};

inline constexpr double kRankTolerance = 1e-8;

// Sensitivity of (<O(t)>, <a^dag a(t)>, <O a^dag a(t)>), O = sigma_x or sigma_z,
// to the initial Bloch components, computed with the matrix-exponential oracle.
RankReport singular_triplet_check(double t, const JCParams& params, Triplet triplet,
                                  double tolerance = kRankTolerance);

}  // namespace spinrecon::jc
