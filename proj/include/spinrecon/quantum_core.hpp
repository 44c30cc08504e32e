#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace spinrecon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-10;

enum class Axis { x, y, z };

// Single-qubit basis ordering is |+> = e1, |-> = e2 throughout.
Matrix pauli(Axis axis);
Matrix identity(Eigen::Index dim);

// Kronecker product; the first factor carries the slow index (system before assistant).
Matrix tensor_product(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);

// Largest |A_ij - conj(A_ji)|.
double hermiticity_deviation(const Matrix& m);
// Largest |(U^dagger U - 1)_ij|.
double unitarity_deviation(const Matrix& m);

/// Cached spectral decomposition of a Hermitian operator, for evaluating
/// exp(-iHt) at many times without re-diagonalising.
class Propagator {
 public:
  explicit Propagator(const Matrix& hamiltonian);

  Matrix at(double t) const;
  const Eigen::VectorXd& energies() const { return energies_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  Eigen::Index dim() const { return energies_.size(); }

 private:
  Eigen::VectorXd energies_;
  Matrix eigenvectors_;
};

// exp(-iHt) by eigendecomposition. Throws NotHermitian if H is not Hermitian to 1e-10.
Matrix hermitian_expm(const Matrix& hamiltonian, double t);

// f(H) for Hermitian H, applied through the spectrum.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXcd values =
      es.eigenvalues().unaryExpr([&](double e) { return Complex(f(e)); });
  return es.eigenvectors() * values.asDiagonal() * es.eigenvectors().adjoint();
}

struct BlochVector {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double rho3 = 0.0;

  Eigen::Vector3d as_vector() const { return {rho1, rho2, rho3}; }
  static BlochVector from_vector(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
  double norm() const { return as_vector().norm(); }
  // rho^2 <= 1 within 1e-12.
  bool is_physical() const { return as_vector().squaredNorm() <= 1.0 + 1e-12; }
};

/// Hermitian, unit-trace, positive semidefinite matrix. Every construction
/// path checks hermiticity and trace to 1e-12 and the eigenvalue floor to -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  const Matrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  Complex expectation(const Matrix& op) const { return (entries_ * op).trace(); }

 private:
  Matrix entries_;
};

// rho = (1 + rho . sigma) / 2. Rejects |rho| > 1.
DensityMatrix bloch_to_density(const BlochVector& v);
// rho_i = Tr(rho sigma_i). Requires a 2x2 density matrix.
BlochVector density_to_bloch(const DensityMatrix& rho);

/// Truncated photon-number space {|0>, ..., |n_max>}.
struct FockSpace {
  int n_max = 0;

  explicit FockSpace(int n_max);
  Eigen::Index dim() const { return n_max + 1; }

  Matrix annihilation() const;
  Matrix creation() const;
  Matrix number() const;
};

struct CoherentState {
  DensityMatrix rho;
  Vector amplitudes;         // renormalized
  double norm_deficit = 0;   // 1 - sum_k |c_k|^2 before renormalization
};

inline constexpr double kDefaultCoherentDeficit = 1e-8;

// |alpha><alpha| on the truncated space. Throws TruncationError if the
// dropped Poisson mass exceeds max_deficit.
CoherentState coherent_state(Complex alpha, const FockSpace& space,
                             double max_deficit = kDefaultCoherentDeficit);

// Poisson weights e^{-m} m^n / n! for n = 0..n_max, evaluated in log space.
Eigen::VectorXd poisson_weights(double mean, int n_max);
// Mass beyond n_max, computed from the terms themselves (no 1 - sum cancellation).
double poisson_tail(double mean, int n_max);

}  // namespace spinrecon
