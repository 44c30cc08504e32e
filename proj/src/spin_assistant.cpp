#include "spinrecon/spin_assistant.hpp"

#include "spinrecon/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace spinrecon::spin {

namespace {

constexpr double kConstraintTol = 1e-12;

Matrix measured_frame(const Matrix& assistant_basis) {
  return tensor_product(identity(2), assistant_basis);
}

// Diagonal of W^dagger X W, real part.
Eigen::Vector4d diagonal_in(const Matrix& w, const Matrix& x) {
  return (w.adjoint() * x * w).diagonal().real();
}

}  // namespace

std::string_view outcome_label(int alpha) {
  static constexpr std::array<std::string_view, kOutcomes> labels{"++", "+-", "-+", "--"};
  return labels.at(static_cast<std::size_t>(alpha));
}

double MappingCoefficients::triple(int i, int j, int k) const {
  return 4.0 * v[i].dot(v[j].cross(v[k]));
}

OptimalAngles optimal_angles() {
  const double phi = 0.5 * std::acos(1.0 / std::numbers::sqrt3);
  const double chi = std::acos(0.5 * std::cos(phi));
  return {phi, chi, chi / std::sin(chi)};
}

double optimal_determinant() { return 1.0 / (12.0 * std::numbers::sqrt3); }

Matrix mixed_coupling_hamiltonian(double phi) {
  const Matrix sx = pauli(Axis::x), sy = pauli(Axis::y), sz = pauli(Axis::z);
  const double c = std::cos(phi), s = std::sin(phi);
  return tensor_product(sx, sx * c + sz * s) / std::numbers::sqrt2 +
         0.5 * tensor_product(identity(2), (sy - sx) * s + sz * c);
}

Matrix mixed_coupling_hamiltonian() { return mixed_coupling_hamiltonian(optimal_angles().phi); }

RotatedSetup ising_field_setup(double phi) {
  const Matrix sx = pauli(Axis::x), sy = pauli(Axis::y), sz = pauli(Axis::z);
  Matrix h = tensor_product(sx, sx) / std::numbers::sqrt2 +
             0.5 * tensor_product(identity(2), sy * std::sin(phi) + sz);
  // Eigenvectors of s_x sin(phi) + s_z cos(phi): rotation by phi about y.
  Matrix basis(2, 2);
  const double c = std::cos(0.5 * phi), s = std::sin(0.5 * phi);
  basis << c, -s, s, c;
  const Matrix sz_rot = sx * std::sin(phi) + sz * std::cos(phi);
  return {std::move(h), std::move(basis), DensityMatrix(0.5 * (identity(2) + sz_rot))};
}

RotatedSetup ising_field_setup() { return ising_field_setup(optimal_angles().phi); }

Matrix closed_form_evolution(const Matrix& h, double chi) {
  return std::cos(chi) * identity(h.rows()) - Complex(0.0, 1.0) * h;
}

void check_constraints(const MappingCoefficients& c) {
  double usum = 0.0;
  Eigen::Vector3d vsum = Eigen::Vector3d::Zero();
  for (int a = 0; a < kOutcomes; ++a) {
    usum += c.u[a];
    vsum += c.v[a];
    if (c.u[a] < c.v[a].norm() - kConstraintTol) {
      throw ConstraintViolation("u_" + std::string(outcome_label(a)) + " = " +
                                std::to_string(c.u[a]) + " < |v| = " +
                                std::to_string(c.v[a].norm()));
    }
  }
  if (std::abs(usum - 1.0) > kConstraintTol) {
    throw ConstraintViolation("sum of u_alpha = " + std::to_string(usum));
  }
  if (vsum.cwiseAbs().maxCoeff() > kConstraintTol) {
    throw ConstraintViolation("sum of v_alpha deviates from zero by " +
                              std::to_string(vsum.cwiseAbs().maxCoeff()));
  }
}

SpinScheme build_scheme(const Matrix& hamiltonian, double tau, const DensityMatrix& assistant,
                        const Matrix& assistant_basis) {
  if (hamiltonian.rows() != 4 || hamiltonian.cols() != 4) {
    throw InvalidArgument("spin scheme needs a 4x4 Hamiltonian");
  }
  if (assistant.dim() != 2) throw InvalidArgument("assistant state must be 2x2");
  if (assistant_basis.rows() != 2 || assistant_basis.cols() != 2 ||
      unitarity_deviation(assistant_basis) > 1e-12) {
    throw InvalidArgument("assistant measurement basis must be a 2x2 unitary");
  }
  const Matrix u = hermitian_expm(hamiltonian, tau);
  const Matrix w = measured_frame(assistant_basis);
  const Matrix& r = assistant.matrix();

  MappingCoefficients c;
  const Eigen::Vector4d u_diag =
      0.5 * diagonal_in(w, u * tensor_product(identity(2), r) * u.adjoint());
  std::array<Eigen::Vector4d, 3> v_diag;
  const std::array<Axis, 3> axes{Axis::x, Axis::y, Axis::z};
  for (int k = 0; k < 3; ++k) {
    v_diag[k] = 0.5 * diagonal_in(w, u * tensor_product(pauli(axes[k]), r) * u.adjoint());
  }
  for (int a = 0; a < kOutcomes; ++a) {
    c.u[a] = u_diag[a];
    c.v[a] = {v_diag[0][a], v_diag[1][a], v_diag[2][a]};
  }
  check_constraints(c);

  SpinScheme scheme{hamiltonian, tau, assistant, assistant_basis, c, 0.0};
  scheme.determinant = c.triple(0, 1, 2);
  return scheme;
}

SpinScheme optimal_scheme() {
  const auto angles = optimal_angles();
  return build_scheme(mixed_coupling_hamiltonian(angles.phi), angles.tau,
                      DensityMatrix(0.5 * (identity(2) + pauli(Axis::z))));
}

SpinScheme rotated_optimal_scheme() {
  const auto angles = optimal_angles();
  const auto setup = ising_field_setup(angles.phi);
  return build_scheme(setup.hamiltonian, angles.tau, setup.initial_assistant,
                      setup.assistant_basis);
}

Probabilities forward_probabilities(const SpinScheme& scheme, const BlochVector& rho) {
  if (!rho.is_physical()) {
    throw UnphysicalState("Bloch vector norm " + std::to_string(rho.norm()) + " exceeds 1");
  }
  const Eigen::Vector3d x = rho.as_vector();
  Probabilities p{};
  for (int a = 0; a < kOutcomes; ++a) {
    p[a] = scheme.coefficients.u[a] + scheme.coefficients.v[a].dot(x);
  }
  return p;
}

Eigen::Vector3d expectation_coordinates(const Probabilities& p) {
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  for (int a = 0; a < kOutcomes; ++a) {
    y[0] += kSystemSign[a] * p[a];
    y[1] += kAssistantSign[a] * p[a];
    y[2] += kSystemSign[a] * kAssistantSign[a] * p[a];
  }
  return y;
}

AffineMap expectation_map(const SpinScheme& scheme) {
  AffineMap map;
  for (int a = 0; a < kOutcomes; ++a) {
    const Eigen::Vector3d w(kSystemSign[a], kAssistantSign[a],
                            kSystemSign[a] * kAssistantSign[a]);
    map.offset += w * scheme.coefficients.u[a];
    map.matrix += w * scheme.coefficients.v[a].transpose();
  }
  return map;
}

SpinReconstruction reconstruct_bloch(const SpinScheme& scheme, const Probabilities& p,
                                     double det_floor) {
  const auto& c = scheme.coefficients;
  if (!(std::abs(scheme.determinant) > det_floor)) {
    throw IllConditioned("spin mapping determinant |Delta| = " +
                             std::to_string(std::abs(scheme.determinant)) +
                             " is below the floor " + std::to_string(det_floor),
                         scheme.determinant);
  }
  AffineMap map;
  for (int a = 0; a < 3; ++a) {
    map.matrix.row(a) = c.v[a].transpose();
    map.offset[a] = c.u[a];
  }
  const Eigen::Vector3d x = map.matrix.partialPivLu().solve(
      Eigen::Vector3d(p[0], p[1], p[2]) - map.offset);
  SpinReconstruction out;
  out.rho = BlochVector::from_vector(x);
  out.residual = p[3] - (c.u[3] + c.v[3].dot(x));
  out.determinant = scheme.determinant;
  return out;
}

BlochVector reconstruct_from_expectations(const SpinScheme& scheme, const Eigen::Vector3d& y,
                                          double det_floor) {
  if (!(std::abs(scheme.determinant) > det_floor)) {
    throw IllConditioned("spin mapping determinant |Delta| = " +
                             std::to_string(std::abs(scheme.determinant)) +
                             " is below the floor " + std::to_string(det_floor),
                         scheme.determinant);
  }
  const AffineMap map = expectation_map(scheme);
  return BlochVector::from_vector(map.matrix.partialPivLu().solve(y - map.offset));
}

BlochVector tetrahedron_inverse(const Eigen::Vector3d& y) {
  return {std::numbers::sqrt3 * y[1], std::numbers::sqrt3 * y[0], std::numbers::sqrt3 * y[2]};
}

}  // namespace spinrecon::spin
