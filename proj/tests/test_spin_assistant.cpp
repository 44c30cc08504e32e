#include "doctest.h"
#include "test_support.hpp"

#include "spinrecon/errors.hpp"
#include "spinrecon/oracle.hpp"
#include "spinrecon/spin_assistant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spinrecon;
using spinrecon::testing::max_abs;

namespace {

DensityMatrix up_state() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return DensityMatrix(m);
}

}  // namespace

TEST_CASE("optimal angles") {
  const auto a = spin::optimal_angles();
  CHECK(std::cos(2.0 * a.phi) == doctest::Approx(1.0 / std::numbers::sqrt3).epsilon(1e-14));
  CHECK(std::cos(a.chi) == doctest::Approx(std::cos(a.phi) / 2.0).epsilon(1e-14));
  CHECK(a.tau == doctest::Approx(a.chi / std::sin(a.chi)).epsilon(1e-14));
  CHECK(spin::optimal_determinant() == doctest::Approx(0.0481125224).epsilon(1e-9));
}

TEST_CASE("mixed coupling Hamiltonian") {
  const Matrix h = spin::mixed_coupling_hamiltonian();
  const auto a = spin::optimal_angles();
  CHECK(std::abs(h.trace()) < 1e-15);
  CHECK(hermiticity_deviation(h) < 1e-15);
  CHECK(max_abs(h * h - std::pow(std::sin(a.chi), 2) * identity(4)) < 1e-12);
  CHECK(max_abs(hermitian_expm(h, a.tau) - spin::closed_form_evolution(h, a.chi)) < 1e-10);
}

TEST_CASE("the other reading of cos chi = 1/2 cos phi fails") {
  // cos chi = 1/(2 cos phi) would need H^2 = sin^2 chi for that chi.
  const auto a = spin::optimal_angles();
  const double alt = std::acos(1.0 / (2.0 * std::cos(a.phi)));
  const Matrix h = spin::mixed_coupling_hamiltonian();
  CHECK(max_abs(h * h - std::pow(std::sin(alt), 2) * identity(4)) > 1e-2);
}

TEST_CASE("optimal scheme: tetrahedron") {
  const spin::SpinScheme s = spin::optimal_scheme();
  const auto& c = s.coefficients;
  CHECK(std::abs(std::abs(s.determinant) - spin::optimal_determinant()) < 1e-10);
  for (int a = 0; a < spin::kOutcomes; ++a) {
    CHECK(std::abs(c.u[a] - 0.25) < 1e-10);
    CHECK(std::abs(c.v[a].norm() - 0.25) < 1e-10);
    for (int b = a + 1; b < spin::kOutcomes; ++b) {
      CHECK(std::abs(c.v[a].dot(c.v[b]) / 0.0625 + 1.0 / 3.0) < 1e-10);
    }
  }
  // Delta recomputed from the coefficients.
  CHECK(std::abs(s.determinant - 4.0 * c.v[0].dot(c.v[1].cross(c.v[2]))) < 1e-12);
  // The degenerate form with a repeated factor vanishes identically.
  CHECK(4.0 * c.v[0].dot(c.v[1].cross(c.v[1])) == 0.0);
}

TEST_CASE("rotated Ising scheme reaches the same optimum") {
  const auto setup = spin::ising_field_setup();
  CHECK(hermiticity_deviation(setup.hamiltonian) == 0.0);
  const spin::SpinScheme r = spin::rotated_optimal_scheme();
  CHECK(std::abs(std::abs(r.determinant) - spin::optimal_determinant()) < 1e-10);
  const Eigen::VectorXd e17 = Eigen::SelfAdjointEigenSolver<Matrix>(spin::mixed_coupling_hamiltonian()).eigenvalues();
  const Eigen::VectorXd e18 = Eigen::SelfAdjointEigenSolver<Matrix>(setup.hamiltonian).eigenvalues();
  CHECK((e17 - e18).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("no interaction gives a singular scheme") {
  const spin::SpinScheme s = spin::build_scheme(Matrix::Zero(4, 4), 1.0, up_state());
  for (int a = 0; a < spin::kOutcomes; ++a) {
    CHECK(std::abs(s.coefficients.v[a][0]) < 1e-15);
    CHECK(std::abs(s.coefficients.v[a][1]) < 1e-15);
  }
  CHECK(std::abs(s.determinant) < 1e-15);
  CHECK_THROWS_AS(spin::reconstruct_bloch(s, {0.25, 0.25, 0.25, 0.25}), IllConditioned);
}

TEST_CASE("forward probabilities") {
  const spin::SpinScheme s = spin::optimal_scheme();
  for (double p : spin::forward_probabilities(s, {0, 0, 0})) CHECK(std::abs(p - 0.25) < 1e-12);

  const double d = 1.0 / (4.0 * std::numbers::sqrt3);
  const auto p = spin::forward_probabilities(s, {0, 0, 1});
  CHECK(std::abs(p[0] - (0.25 + d)) < 1e-12);
  CHECK(std::abs(p[1] - (0.25 - d)) < 1e-12);
  CHECK(std::abs(p[2] - (0.25 - d)) < 1e-12);
  CHECK(std::abs(p[3] - (0.25 + d)) < 1e-12);

  CHECK_THROWS_AS(spin::forward_probabilities(s, {1.0, 1.0, 0.0}), UnphysicalState);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const BlochVector rho = testing::random_bloch(rng);
    const auto q = spin::forward_probabilities(s, rho);
    const auto direct = oracle::spin_joint_probabilities(s, rho);
    double total = 0.0;
    for (int a = 0; a < spin::kOutcomes; ++a) {
      CHECK(q[a] >= -1e-15);
      CHECK(std::abs(q[a] - direct[a]) < 1e-12);
      total += q[a];
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("reconstruction") {
  const spin::SpinScheme s = spin::optimal_scheme();
  const auto flat = spin::reconstruct_bloch(s, {0.25, 0.25, 0.25, 0.25});
  CHECK(flat.rho.norm() < 1e-12);

  std::mt19937_64 rng(17);
  double worst = 0.0, worst_closed = 0.0, worst_fwd = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const BlochVector rho = testing::random_bloch(rng);
    const auto p = spin::forward_probabilities(s, rho);
    const auto rec = spin::reconstruct_bloch(s, p);
    worst = std::max(worst, (rec.rho.as_vector() - rho.as_vector()).norm());
    worst_closed = std::max(worst_closed,
        (spin::tetrahedron_inverse(spin::expectation_coordinates(p)).as_vector() - rho.as_vector()).norm());
    CHECK(std::abs(rec.residual) < 1e-12);
    const auto again = spin::forward_probabilities(s, rec.rho);
    for (int a = 0; a < spin::kOutcomes; ++a) worst_fwd = std::max(worst_fwd, std::abs(again[a] - p[a]));
  }
  CHECK(worst < 1e-10);
  CHECK(worst_closed < 1e-10);
  CHECK(worst_fwd < 1e-10);
}

TEST_CASE("closed-form inverse labels") {
  // <sigma_z> measures rho2 and <s_z> measures rho1 for this tetrahedron.
  const spin::SpinScheme s = spin::optimal_scheme();
  const BlochVector rho{0.5, -0.2, 0.1};
  const Eigen::Vector3d y = spin::expectation_coordinates(spin::forward_probabilities(s, rho));
  CHECK(std::abs(std::numbers::sqrt3 * y[0] - rho.rho2) < 1e-12);
  CHECK(std::abs(std::numbers::sqrt3 * y[1] - rho.rho1) < 1e-12);
  CHECK(std::abs(std::numbers::sqrt3 * y[2] - rho.rho3) < 1e-12);
  // The labelling rho1 = sqrt3 <sigma_z> would get this state wrong.
  CHECK(std::abs(std::numbers::sqrt3 * y[0] - rho.rho1) > 0.5);
  CHECK((spin::reconstruct_from_expectations(s, y).as_vector() - rho.as_vector()).norm() < 1e-12);
}

TEST_CASE("constraints hold for random schemes and |Delta| is bounded") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(1e-6, 10.0);
  double max_det = 0.0;
  for (int k = 0; k < 300; ++k) {
    const spin::SpinScheme s =
        spin::build_scheme(testing::random_hermitian(rng, 4), ut(rng), up_state());
    const auto& c = s.coefficients;
    double su = 0.0;
    Eigen::Vector3d sv = Eigen::Vector3d::Zero();
    for (int a = 0; a < spin::kOutcomes; ++a) {
      su += c.u[a];
      sv += c.v[a];
      CHECK(c.u[a] >= c.v[a].norm() - 1e-12);
    }
    CHECK(std::abs(su - 1.0) < 1e-12);
    CHECK(sv.norm() < 1e-12);
    max_det = std::max(max_det, std::abs(s.determinant));
  }
  CHECK(max_det <= spin::optimal_determinant() + 1e-9);
}

TEST_CASE("triple product is antisymmetric") {
  const auto& c = spin::optimal_scheme().coefficients;
  const double base = c.triple(0, 1, 2);
  CHECK(std::abs(c.triple(1, 0, 2) + base) < 1e-15);
  CHECK(std::abs(c.triple(0, 2, 1) + base) < 1e-15);
  CHECK(std::abs(c.triple(2, 1, 0) + base) < 1e-15);
  CHECK(std::abs(c.triple(1, 2, 0) - base) < 1e-15);
  CHECK(c.triple(0, 0, 1) == 0.0);
}

TEST_CASE("constraint violation is a hard failure") {
  spin::MappingCoefficients c;
  c.u = {0.25, 0.25, 0.25, 0.25};
  c.v = {Eigen::Vector3d(0.5, 0, 0), Eigen::Vector3d(-0.5, 0, 0), Eigen::Vector3d::Zero(),
         Eigen::Vector3d::Zero()};
  CHECK_THROWS_AS(spin::check_constraints(c), ConstraintViolation);
}

TEST_CASE("outcome labels") {
  CHECK(spin::outcome_label(0) == "++");
  CHECK(spin::outcome_label(1) == "+-");
  CHECK(spin::outcome_label(2) == "-+");
  CHECK(spin::outcome_label(3) == "--");
}
