#pragma once

#include "spinrecon/linear_map.hpp"
#include "spinrecon/quantum_core.hpp"

#include <array>
#include <string_view>

namespace spinrecon::spin {

// Joint outcome index alpha = (i, a), system spin i first: ++, +-, -+, --.
inline constexpr int kOutcomes = 4;
inline constexpr std::array<int, kOutcomes> kSystemSign{+1, +1, -1, -1};
inline constexpr std::array<int, kOutcomes> kAssistantSign{+1, -1, +1, -1};
std::string_view outcome_label(int alpha);

using Probabilities = std::array<double, kOutcomes>;

/// Affine map P_alpha = u_alpha + v_alpha . rho.
struct MappingCoefficients {
  std::array<double, kOutcomes> u{};
  std::array<Eigen::Vector3d, kOutcomes> v{};

  // 4 v_i . (v_j x v_k); antisymmetric in (i, j, k).
  double triple(int i, int j, int k) const;
};

struct SpinScheme {
  Matrix hamiltonian;           // 4x4, system (x) assistant
  double tau = 0.0;             // interaction time
  DensityMatrix initial_assistant{identity(2) / 2.0};
  Matrix assistant_basis;       // columns: assistant measurement eigenvectors for a = +1, -1
  MappingCoefficients coefficients;
  double determinant = 0.0;     // 4 v_{++} . (v_{+-} x v_{-+})
};

// Angles of the optimal construction: 2*phi is the angle between v_{++} and
// the z axis (cos 2phi = 1/sqrt3), cos chi = cos(phi)/2, tau = chi / sin chi.
struct OptimalAngles {
  double phi;
  double chi;
  double tau;
};
OptimalAngles optimal_angles();

// |Delta| of the regular-tetrahedron configuration, 1/(12 sqrt3).
double optimal_determinant();

Matrix mixed_coupling_hamiltonian(double phi);
Matrix mixed_coupling_hamiltonian();

// Ising coupling plus transverse field on the assistant, to be measured and
// prepared along s_z' = s_x sin(phi) + s_z cos(phi).
struct RotatedSetup {
  Matrix hamiltonian;
  Matrix assistant_basis;
  DensityMatrix initial_assistant;
};
RotatedSetup ising_field_setup(double phi);
RotatedSetup ising_field_setup();

// cos(chi) - i H; equals exp(-i H tau) when H^2 = sin^2(chi) and tau = chi / sin(chi).
Matrix closed_form_evolution(const Matrix& h, double chi);

// Throws ConstraintViolation if sum u = 1, sum v = 0 or u >= |v| fails.
void check_constraints(const MappingCoefficients& c);

SpinScheme build_scheme(const Matrix& hamiltonian, double tau, const DensityMatrix& assistant,
                        const Matrix& assistant_basis = identity(2));

SpinScheme optimal_scheme();
SpinScheme rotated_optimal_scheme();

Probabilities forward_probabilities(const SpinScheme& scheme, const BlochVector& rho);

// (<sigma_z>, <a>, <a sigma_z>) with a the measured assistant sign.
Eigen::Vector3d expectation_coordinates(const Probabilities& p);

// Map from the Bloch vector to expectation coordinates.
AffineMap expectation_map(const SpinScheme& scheme);

struct SpinReconstruction {
  BlochVector rho;
  double residual = 0.0;    // P_{--} minus its prediction from the other three
  double determinant = 0.0;
};

// Solves the ++, +-, -+ equations; the -- equation is reported as residual.
SpinReconstruction reconstruct_bloch(const SpinScheme& scheme, const Probabilities& p,
                                     double det_floor = kDefaultDeterminantFloor);

BlochVector reconstruct_from_expectations(const SpinScheme& scheme, const Eigen::Vector3d& y,
                                          double det_floor = kDefaultDeterminantFloor);

// Closed-form inversion for the tetrahedron with v_{++} ~ (1,1,1):
// rho = sqrt3 (<s_z>, <sigma_z>, <s_z sigma_z>).
BlochVector tetrahedron_inverse(const Eigen::Vector3d& y);

}  // namespace spinrecon::spin
