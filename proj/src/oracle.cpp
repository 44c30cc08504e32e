#include "spinrecon/oracle.hpp"

#include "spinrecon/errors.hpp"

#include <cmath>

namespace spinrecon::oracle {

namespace {

Matrix sigma_plus_1q() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;  // |+><-|
  return m;
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

JCOperators jc_operators(const FockSpace& space) {
  JCOperators ops;
  ops.space = space;
  const Matrix id_f = identity(space.dim());
  const Matrix id_s = identity(2);
  ops.a = tensor_product(id_s, space.annihilation());
  ops.a_dag = tensor_product(id_s, space.creation());
  ops.number = tensor_product(id_s, space.number());
  ops.sigma_plus = tensor_product(sigma_plus_1q(), id_f);
  ops.sigma_minus = ops.sigma_plus.adjoint();
  ops.sigma_x = tensor_product(pauli(Axis::x), id_f);
  ops.sigma_z = tensor_product(pauli(Axis::z), id_f);
  ops.interaction = ops.sigma_plus * ops.a + ops.sigma_minus * ops.a_dag;
  ops.excitations = ops.number + ops.sigma_plus * ops.sigma_minus;
  return ops;
}

Matrix build_jc_hamiltonian(const FockSpace& space, double gamma, double omega) {
  const JCOperators ops = jc_operators(space);
  return omega * ops.number + 0.5 * omega * ops.sigma_z + gamma * ops.interaction;
}

DensityMatrix evolve(const DensityMatrix& state, const Matrix& hamiltonian, double t) {
  if (hamiltonian.rows() != state.dim()) throw InvalidArgument("dimension mismatch in evolve");
  const Matrix u = hermitian_expm(hamiltonian, t);
  return DensityMatrix(hermitize(u * state.matrix() * u.adjoint()));
}

namespace {

struct HeisenbergPieces {
  Matrix phase;  // e^{i(gV - w)t}
  Matrix cos_k;  // cos(g K t)
  Matrix sin_k;  // sin(g K t) / K
};

HeisenbergPieces heisenberg_pieces(const JCOperators& ops, double gamma, double omega, double t) {
  const Matrix shifted = ops.excitations + identity(ops.excitations.rows());
  return {hermitian_function(ops.interaction,
                             [&](double v) { return std::exp(Complex(0.0, (gamma * v - omega) * t)); }),
          hermitian_function(shifted, [&](double n) { return std::cos(gamma * std::sqrt(n) * t); }),
          hermitian_function(shifted, [&](double n) {
            const double k = std::sqrt(n);
            return std::sin(gamma * k * t) / k;
          })};
}

}  // namespace

Matrix heisenberg_annihilation(const JCOperators& ops, double gamma, double omega, double t) {
  const auto p = heisenberg_pieces(ops, gamma, omega, t);
  const Complex i(0.0, 1.0);
  return p.phase * ((p.cos_k - i * ops.interaction * p.sin_k) * ops.a - i * p.sin_k * ops.sigma_minus);
}

Matrix heisenberg_sigma_minus(const JCOperators& ops, double gamma, double omega, double t) {
  const auto p = heisenberg_pieces(ops, gamma, omega, t);
  const Complex i(0.0, 1.0);
  return p.phase * ((p.cos_k + i * ops.interaction * p.sin_k) * ops.sigma_minus - i * p.sin_k * ops.a);
}

JCOracle::JCOracle(const jc::JCParams& params)
    : JCOracle(params.space(), params.gamma, params.omega, params.alpha) {}

JCOracle::JCOracle(const FockSpace& space, double gamma, double omega, Complex alpha)
    : ops_(jc_operators(space)),
      hamiltonian_(omega * ops_.number + 0.5 * omega * ops_.sigma_z + gamma * ops_.interaction),
      propagator_(hamiltonian_) {
  const CoherentState field = coherent_state(alpha, space);
  field_ = field.rho.matrix();
  deficit_ = field.norm_deficit;
}

DensityMatrix JCOracle::initial_state(const BlochVector& rho0) const {
  return DensityMatrix(tensor_product(bloch_to_density(rho0).matrix(), field_));
}

DensityMatrix JCOracle::state_at(double t, const BlochVector& rho0) const {
  const Matrix u = propagator_.at(t);
  return DensityMatrix(hermitize(u * initial_state(rho0).matrix() * u.adjoint()));
}

Eigen::Vector3d JCOracle::expectations(double t, const BlochVector& rho0,
                                       const std::array<Matrix, 3>& observables) const {
  const DensityMatrix rho = state_at(t, rho0);
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) out[k] = rho.expectation(observables[k]).real();
  return out;
}

jc::ExpectationTriple JCOracle::expectations(double t, const BlochVector& rho0) const {
  return jc::ExpectationTriple::from_vector(expectations(
      t, rho0, {ops_.sigma_x, ops_.number, ops_.sigma_x * ops_.number}));
}

JointDistribution JCOracle::joint_distribution(double t, const BlochVector& rho0) const {
  const Matrix rho = state_at(t, rho0).matrix();
  const FockSpace& space = ops_.space;
  JointDistribution dist;
  dist.truncation_deficit = deficit_;
  // pi_+-^x = (1 +- sigma_x)/2; the (s, s') block of rho for photon n is rho(idx(s,n), idx(s',n)).
  for (int n = 0; n <= space.n_max; ++n) {
    const Complex pp = rho(jc::joint_index(0, n, space), jc::joint_index(0, n, space));
    const Complex mm = rho(jc::joint_index(1, n, space), jc::joint_index(1, n, space));
    const Complex pm = rho(jc::joint_index(0, n, space), jc::joint_index(1, n, space));
    const double diag = 0.5 * (pp + mm).real();
    const double coh = pm.real();  // Re <+|rho|->, so <sigma_x> block = 2 Re(pm)
    for (int i : {+1, -1}) {
      dist.outcomes.push_back({i, n});
      dist.probabilities.push_back(std::max(0.0, diag + i * coh));
    }
  }
  return dist;
}

jc::ExpectationTriple oracle_expectations(double t, const jc::JCParams& params,
                                          const BlochVector& rho0) {
  return JCOracle(params).expectations(t, rho0);
}

spin::Probabilities spin_joint_probabilities(const spin::SpinScheme& scheme,
                                             const BlochVector& rho) {
  const Matrix u = hermitian_expm(scheme.hamiltonian, scheme.tau);
  const Matrix joint =
      u * tensor_product(bloch_to_density(rho).matrix(), scheme.initial_assistant.matrix()) *
      u.adjoint();
  spin::Probabilities p{};
  const Matrix sz = pauli(Axis::z);
  for (int alpha = 0; alpha < spin::kOutcomes; ++alpha) {
    const Matrix pi = 0.5 * (identity(2) + spin::kSystemSign[alpha] * sz);
    const Vector e = scheme.assistant_basis.col(spin::kAssistantSign[alpha] > 0 ? 0 : 1);
    const Matrix proj = tensor_product(pi, e * e.adjoint());
    p[alpha] = (joint * proj).trace().real();
  }
  return p;
}

JointDistribution spin_joint_distribution(const spin::SpinScheme& scheme, const BlochVector& rho) {
  const spin::Probabilities p = spin_joint_probabilities(scheme, rho);
  JointDistribution dist;
  for (int alpha = 0; alpha < spin::kOutcomes; ++alpha) {
    dist.outcomes.push_back({spin::kSystemSign[alpha], spin::kAssistantSign[alpha]});
    dist.probabilities.push_back(std::max(0.0, p[alpha]));
  }
  return dist;
}

}  // namespace spinrecon::oracle
