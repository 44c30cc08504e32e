#pragma once

#include "spinrecon/jc_model.hpp"
#include "spinrecon/outcomes.hpp"
#include "spinrecon/spin_assistant.hpp"

#include <array>

// Brute-force ground truth: full Hamiltonians on the truncated joint space,
// exact exponentials, traces taken directly.
namespace spinrecon::oracle {

// Operators on spin (x) Fock, spin index slow.
struct JCOperators {
  FockSpace space{0};
  Matrix a;
  Matrix a_dag;
  Matrix number;       // 1 (x) a^dag a
  Matrix sigma_plus;
  Matrix sigma_minus;
  Matrix sigma_x;
  Matrix sigma_z;
  Matrix interaction;  // V = sigma_+ a + sigma_- a^dag
  Matrix excitations;  // N = a^dag a + sigma_+ sigma_-
};

JCOperators jc_operators(const FockSpace& space);

// omega a^dag a + (omega/2) sigma_z + gamma (sigma_+ a + sigma_- a^dag).
Matrix build_jc_hamiltonian(const FockSpace& space, double gamma, double omega);

// U rho U^dagger, U = exp(-iHt).
DensityMatrix evolve(const DensityMatrix& state, const Matrix& hamiltonian, double t);

// Heisenberg-picture operators from the closed-form solution
//   a(t)       = e^{i(gV - w)t} [(cos gKt - iV sin(gKt)/K) a - i sin(gKt)/K sigma_-]
//   sigma_-(t) = e^{i(gV - w)t} [(cos gKt + iV sin(gKt)/K) sigma_- - i sin(gKt)/K a]
// with K = sqrt(N + 1), built on the truncated space.
Matrix heisenberg_annihilation(const JCOperators& ops, double gamma, double omega, double t);
Matrix heisenberg_sigma_minus(const JCOperators& ops, double gamma, double omega, double t);

// Extra Fock levels given to a reference oracle. The top level |n_max>|+> has
// no partner inside the truncation, so its dynamics are wrong; with headroom
// that level carries negligible weight.
inline constexpr int kReferenceHeadroom = 10;

inline jc::JCParams reference_params(const jc::JCParams& p) {
  jc::JCParams wide = p;
  wide.n_max += kReferenceHeadroom;
  return wide;
}

/// Exact JC dynamics of rho_S (x) |alpha><alpha| on a truncated Fock space.
/// Diagonalises the Hamiltonian once; every query after that is a pair of
/// dense products.
class JCOracle {
 public:
  explicit JCOracle(const jc::JCParams& params);
  JCOracle(const FockSpace& space, double gamma, double omega, Complex alpha);

  DensityMatrix initial_state(const BlochVector& rho0) const;
  DensityMatrix state_at(double t, const BlochVector& rho0) const;

  jc::ExpectationTriple expectations(double t, const BlochVector& rho0) const;
  Eigen::Vector3d expectations(double t, const BlochVector& rho0,
                               const std::array<Matrix, 3>& observables) const;

  // P(i, n) = Tr[rho(t) (pi_i^x (x) |n><n|)], i = +1 listed first for each n.
  JointDistribution joint_distribution(double t, const BlochVector& rho0) const;

  const JCOperators& operators() const { return ops_; }
  const Matrix& hamiltonian() const { return hamiltonian_; }
  double norm_deficit() const { return deficit_; }

 private:
  JCOperators ops_;
  Matrix hamiltonian_;
  Propagator propagator_;
  Matrix field_;
  double deficit_ = 0.0;
};

jc::ExpectationTriple oracle_expectations(double t, const jc::JCParams& params,
                                          const BlochVector& rho0);

// Tr[U (rho (x) R) U^dagger (pi_i (x) p_a)] evaluated directly from the
// scheme's Hamiltonian, time, assistant state and measurement basis.
spin::Probabilities spin_joint_probabilities(const spin::SpinScheme& scheme,
                                             const BlochVector& rho);

JointDistribution spin_joint_distribution(const spin::SpinScheme& scheme, const BlochVector& rho);

}  // namespace spinrecon::oracle
