#include "spinrecon/quantum_core.hpp"

#include "spinrecon/errors.hpp"

#include <cmath>
#include <string>

namespace spinrecon {

Matrix pauli(Axis axis) {
  Matrix m = Matrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::y:
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case Axis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double hermiticity_deviation(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const Matrix& m) {
  return (m.adjoint() * m - identity(m.cols())).cwiseAbs().maxCoeff();
}

Propagator::Propagator(const Matrix& hamiltonian) {
  const double dev = hermiticity_deviation(hamiltonian);
  if (!(dev <= kHermitianTol)) {
    throw NotHermitian("hamiltonian is not Hermitian (max asymmetry " + std::to_string(dev) + ")",
                       dev);
  }
  const Matrix symmetric = 0.5 * (hamiltonian + hamiltonian.adjoint());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  energies_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

Matrix Propagator::at(double t) const {
  const Vector phases =
      energies_.unaryExpr([t](double e) { return std::exp(Complex(0.0, -e * t)); });
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Matrix hermitian_expm(const Matrix& hamiltonian, double t) {
  return Propagator(hamiltonian).at(t);
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw InvalidArgument("density matrix must be square and non-empty");
  }
  const double herm = hermiticity_deviation(entries_);
  if (herm > 1e-12) {
    throw NotHermitian("density matrix not Hermitian (deviation " + std::to_string(herm) + ")", herm);
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw UnphysicalState("density matrix trace " + std::to_string(tr.real()) + " != 1");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw UnphysicalState("density matrix has negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix bloch_to_density(const BlochVector& v) {
  if (!v.is_physical()) {
    throw UnphysicalState("Bloch vector norm " + std::to_string(v.norm()) + " exceeds 1");
  }
  Matrix m = 0.5 * (identity(2) + v.rho1 * pauli(Axis::x) + v.rho2 * pauli(Axis::y) +
                    v.rho3 * pauli(Axis::z));
  return DensityMatrix(std::move(m));
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw InvalidArgument("density_to_bloch needs a 2x2 density matrix");
  return {rho.expectation(pauli(Axis::x)).real(), rho.expectation(pauli(Axis::y)).real(),
          rho.expectation(pauli(Axis::z)).real()};
}

FockSpace::FockSpace(int n) : n_max(n) {
  if (n < 0) throw InvalidArgument("n_max must be non-negative");
}

Matrix FockSpace::annihilation() const {
  Matrix a = Matrix::Zero(dim(), dim());
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix FockSpace::creation() const { return annihilation().adjoint(); }

Matrix FockSpace::number() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (int n = 0; n <= n_max; ++n) m(n, n) = n;
  return m;
}

Eigen::VectorXd poisson_weights(double mean, int n_max) {
  Eigen::VectorXd w(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    if (mean == 0.0) {
      w[n] = n == 0 ? 1.0 : 0.0;
    } else {
      w[n] = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    }
  }
  return w;
}

double poisson_tail(double mean, int n_max) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && (term < 1e-18 * tail || term < 1e-300)) break;
  }
  return tail;
}

CoherentState coherent_state(Complex alpha, const FockSpace& space, double max_deficit) {
  const double mean = std::norm(alpha);
  Vector c(space.dim());
  for (int k = 0; k <= space.n_max; ++k) {
    // e^{-|a|^2/2} a^k / sqrt(k!) with the modulus taken in log space.
    const double mod = mean == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                   : std::exp(-0.5 * mean + k * std::log(std::abs(alpha)) -
                                              0.5 * std::lgamma(k + 1.0));
    c[k] = mod * std::exp(Complex(0.0, k * std::arg(alpha)));
  }
  const double deficit = poisson_tail(mean, space.n_max);
  if (deficit > max_deficit) {
    throw TruncationError("coherent state |alpha|^2 = " + std::to_string(mean) +
                              " loses Poisson mass " + std::to_string(deficit) +
                              " beyond n_max = " + std::to_string(space.n_max),
                          deficit);
  }
  c /= c.norm();
  Matrix rho = c * c.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace();
  return {DensityMatrix(std::move(rho)), std::move(c), deficit};
}

}  // namespace spinrecon
