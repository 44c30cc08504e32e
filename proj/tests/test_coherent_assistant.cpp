#include "doctest.h"
#include "test_support.hpp"

#include "spinrecon/coherent_assistant.hpp"
#include "spinrecon/errors.hpp"
#include "spinrecon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spinrecon;
using spinrecon::testing::max_abs;

namespace {

constexpr Complex kI{0.0, 1.0};

jc::JCParams fig_params(double alpha_sq, std::optional<int> n_max = std::nullopt) {
  return jc::JCParams::make(0.1, 0.1, std::sqrt(alpha_sq), n_max);
}

double rel_dev(const Eigen::Vector3d& a, const Eigen::Vector3d& o) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a[k] - o[k]) / std::max(std::abs(o[k]), 1.0));
  return worst;
}

// Oracle M and b: expectations are affine in the Bloch vector.
AffineMap oracle_map(const oracle::JCOracle& orc, double t) {
  AffineMap map;
  map.offset = orc.expectations(t, {0, 0, 0}).as_vector();
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[j] = 1.0;
    map.matrix.col(j) = orc.expectations(t, BlochVector::from_vector(e)).as_vector() - map.offset;
  }
  return map;
}

}  // namespace

TEST_CASE("JCParams validation and auto truncation") {
  CHECK_THROWS_AS(jc::JCParams::make(0.0, 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(jc::JCParams::make(0.1, -0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(jc::JCParams::make(0.1, 0.1, 3.0, 5), TruncationError);
  CHECK(jc::JCParams::make(0.1, 0.1, 3.0).n_max == 30);
  const jc::JCParams big = jc::JCParams::make(0.1, 0.1, 5.0);
  CHECK(big.n_max > 30);
  CHECK(big.poisson_tail() < 1e-8);
  CHECK_THROWS_AS(jc::JCParams::make(0.1, 0.1, 5.0, big.n_max - 1), TruncationError);
  CHECK_THROWS_AS(jc::JCParams::make(0.1, 0.1, 1.0, 0), InvalidArgument);
}

TEST_CASE("dressed basis") {
  const FockSpace space(10);
  const auto basis = jc::dressed_basis(space);
  const auto ops = oracle::jc_operators(space);
  const Matrix k_op = hermitian_function(ops.excitations + identity(ops.excitations.rows()),
                                         [](double n) { return std::sqrt(std::max(n, 0.0)); });
  REQUIRE(basis.size() == static_cast<std::size_t>(2 * space.dim()));
  Matrix completeness = Matrix::Zero(2 * space.dim(), 2 * space.dim());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& d = basis[i];
    completeness += d.state * d.state.adjoint();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex ip = basis[i].state.dot(basis[j].state);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
    if (d.edge) continue;
    const double n = d.n;
    CHECK((ops.interaction * d.state - d.sign * std::sqrt(n) * d.state).norm() < 1e-14);
    CHECK((k_op * d.state - std::sqrt(n + 1.0) * d.state).norm() < 1e-12);
  }
  CHECK(max_abs(completeness - identity(2 * space.dim())) < 1e-14);
}

TEST_CASE("dressed coefficients") {
  const jc::JCParams p = fig_params(4.0);
  for (int n : {0, 1, 5, 17}) {
    const auto d = jc::coefficients(n, 0.0, p);
    CHECK(std::abs(d.f_plus - 1.0) < 1e-15);
    CHECK(std::abs(d.f_minus - 1.0) < 1e-15);
    CHECK(std::abs(d.s) < 1e-15);
    CHECK(std::abs(d.g_plus - 1.0) < 1e-15);
    CHECK(std::abs(d.g_minus - 1.0) < 1e-15);
  }
  const double t = 7.3;
  const auto d0 = jc::coefficients(0, t, p);
  CHECK(std::abs(d0.f_plus - std::exp(-kI * (0.1 * t))) < 1e-15);
  CHECK(std::abs(d0.f_minus - d0.f_plus) < 1e-15);
  CHECK(std::abs(d0.g_plus - std::cos(0.1 * t)) < 1e-15);
  CHECK(std::abs(d0.g_minus - std::cos(0.1 * t)) < 1e-15);

  for (int n = 0; n < 20; ++n) {
    for (double tt : {0.5, 3.0, 40.0, 199.0}) {
      const auto d = jc::coefficients(n, tt, p);
      CHECK(std::abs(std::abs(d.f_plus) - 1.0) < 1e-14);
      CHECK(std::abs(std::abs(d.f_minus) - 1.0) < 1e-14);
      CHECK(std::abs(std::conj(d.s) + d.s) < 1e-15);  // purely imaginary
    }
  }
  CHECK_THROWS_AS(jc::coefficients(-1, 1.0, p), InvalidArgument);
  CHECK_THROWS_AS(jc::coefficients(1, -1.0, p), InvalidArgument);
}

TEST_CASE("dressed coefficients against 2x2 block exponentials") {
  // Block {|n>|+>, |n+1>|->}: H = w(n + 1/2) + g sqrt(n+1) sigma_x.
  const jc::JCParams p = jc::JCParams::make(0.13, 0.07, 1.0, 12);
  const oracle::JCOracle orc(p);
  const FockSpace space = p.space();
  for (double t : {0.7, 5.0, 33.0}) {
    const Matrix u = hermitian_expm(orc.hamiltonian(), t);
    for (int n = 0; n < space.n_max; ++n) {
      const auto d = jc::coefficients(n, t, p);
      const Complex phase = std::exp(-kI * (p.omega * (n + 0.5) * t));
      const auto i_plus = jc::joint_index(0, n, space), i_minus = jc::joint_index(1, n + 1, space);
      CHECK(std::abs(u(i_plus, i_plus) - phase * 0.5 * (d.g_plus + d.g_minus)) < 1e-12);
      CHECK(std::abs(u(i_minus, i_plus) + phase * std::sqrt(n + 1.0) * d.s) < 1e-12);
      // f+-_n: e^{iHt} phi_n^+- = f+-_n e^{i w (n + 1/2) t} phi_n^+-, n >= 1.
      if (n >= 1) {
        for (int sign : {+1, -1}) {
          Vector phi = Vector::Zero(2 * space.dim());
          phi[jc::joint_index(0, n - 1, space)] = 1.0 / std::numbers::sqrt2;
          phi[jc::joint_index(1, n, space)] = sign / std::numbers::sqrt2;
          const Complex f = sign > 0 ? d.f_plus : d.f_minus;
          const Vector lhs = u.adjoint() * phi;
          CHECK((lhs - f * std::conj(phase) * phi).norm() < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("uncorrected coefficient block: structural properties") {
  const jc::JCParams p = fig_params(4.0);
  const double m = 4.0;
  for (int n : {0, 1, 3, 10}) {
    const Eigen::Matrix3cd a0 = jc::uncorrected_A(n, 0.0, p);
    CHECK(std::abs(a0(0, 0)) < 1e-15);
    CHECK(std::abs(a0(0, 1)) < 1e-15);
    CHECK(std::abs(a0(0, 2) - 1.0) < 1e-15);
    CHECK(std::abs(a0(1, 1)) < 1e-15);
    CHECK(std::abs(a0(1, 2)) < 1e-15);
    const double a21 = ((1.0 + 2.0 * n) * (1.0 + n - m) - (1.0 + n + m)) / (2.0 * (n + 1.0));
    CHECK(std::abs(a0(1, 0) - a21) < 1e-12);
  }
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(0.0, 200.0);
  std::uniform_int_distribution<int> un(0, 30);
  for (int k = 0; k < 50; ++k) {
    const int n = un(rng);
    const double t = ut(rng);
    const Eigen::Matrix3cd a = jc::uncorrected_A(n, t, p);
    CHECK(a(2, 0) == static_cast<double>(n) * a(0, 0));
    CHECK(a(2, 1) == static_cast<double>(n) * a(0, 2));
    CHECK(a(2, 2) == static_cast<double>(n) * a(0, 1));
    CHECK(a(1, 1) == std::conj(a(1, 2)));
  }
  CHECK_THROWS_AS(jc::uncorrected_A(1, 1.0, jc::JCParams::make(0.1, 0.1, 0.0)), InvalidArgument);
}

TEST_CASE("uncorrected block disagrees with the exact dynamics; corrected term agrees") {
  // lambda2* coefficient of <sigma_+(t)> per n, isolated with a single-n field |n>.
  // Compared through the Poisson sums: the corrected series reproduces the
  // oracle, the uncorrected one does not.
  const jc::JCParams p = fig_params(1.0);
  const oracle::JCOracle orc(oracle::reference_params(p));
  const Eigen::VectorXd w = poisson_weights(1.0, p.n_max);
  const BlochVector rho{0.4, 0.3, -0.2};
  const double l1 = 0.5 * (1.0 + rho.rho3);
  const Complex l2 = 0.5 * Complex(rho.rho1, rho.rho2);
  double corrected_gap = 0.0, uncorrected_gap = 0.0;
  for (double t : {5.0, 12.0, 27.0, 60.0}) {
    Complex sp_fixed = 0.0, sp_orig = 0.0;
    for (int n = 0; n <= p.n_max; ++n) {
      const auto term = jc::corrected_term(n, t, p);
      sp_fixed += w[n] * (term.offset[0] + term.lambda(0, 0) * l1 + term.lambda(0, 1) * l2 +
                          term.lambda(0, 2) * std::conj(l2));
      const Eigen::Matrix3cd a = jc::uncorrected_A(n, t, p);
      // Columns of the uncorrected block: lambda1, lambda2, lambda2*; same offset.
      sp_orig += w[n] * (term.offset[0] + a(0, 0) * l1 + a(0, 2) * l2 + a(0, 1) * std::conj(l2));
    }
    const double truth = orc.expectations(t, rho).sx;
    corrected_gap = std::max(corrected_gap, std::abs(2.0 * sp_fixed.real() - truth));
    uncorrected_gap = std::max(uncorrected_gap, std::abs(2.0 * sp_orig.real() - truth));
  }
  CHECK(corrected_gap < 1e-10);
  CHECK(uncorrected_gap > 1e-3);
}

TEST_CASE("corrected terms handle complex alpha") {
  const jc::JCParams p = jc::JCParams::make(0.1, 0.1, Complex(1.2, -0.9));
  const oracle::JCOracle orc(oracle::reference_params(p));
  const BlochVector rho{-0.3, 0.5, 0.6};
  for (double t : {3.0, 17.0, 80.0, 150.0}) {
    const Eigen::Vector3d y = jc::analytic_M(t, p).map.apply(rho.as_vector());
    CHECK(rel_dev(y, orc.expectations(t, rho).as_vector()) < 1e-8);
  }
}

TEST_CASE("analytic M at t = 0") {
  const jc::JCParams p = fig_params(4.0);
  const auto sys = jc::analytic_M(0.0, p);
  CHECK((sys.M().row(0) - Eigen::RowVector3d(1, 0, 0)).norm() < 1e-12);
  CHECK(std::abs(sys.M()(1, 0)) < 1e-12);
  CHECK(std::abs(sys.M()(1, 1)) < 1e-12);
  CHECK(std::abs(sys.M()(2, 1)) < 1e-12);
  CHECK(std::abs(sys.M()(2, 2)) < 1e-12);
  CHECK(std::abs(sys.determinant) < 1e-12);
}

TEST_CASE("analytic expectations: examples") {
  const auto e1 = jc::expectations_analytic(0.0, jc::JCParams::make(0.1, 0.1, 2.0), {0, 0, 1});
  CHECK((e1.as_vector() - Eigen::Vector3d(0, 4, 0)).norm() < 1e-10);
  const auto e2 = jc::expectations_analytic(0.0, jc::JCParams::make(0.1, 0.1, 1.0), {1, 0, 0});
  CHECK((e2.as_vector() - Eigen::Vector3d(1, 1, 1)).norm() < 1e-10);

  const jc::JCParams p = fig_params(1.0);
  const auto a = jc::expectations_analytic(10.0, p, {0, 0, 1});
  const auto o = oracle::oracle_expectations(10.0, oracle::reference_params(p), {0, 0, 1});
  CHECK(rel_dev(a.as_vector(), o.as_vector()) < 1e-7);
  CHECK(std::abs(a.sx) <= 1.0);
  CHECK(a.n_phot >= 0.0);
}

TEST_CASE("analytic expectations equal M x + b") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ut(0.0, 200.0);
  for (double a2 : {1.0, 4.0, 9.0}) {
    const jc::JCParams p = fig_params(a2);
    for (int k = 0; k < 20; ++k) {
      const double t = ut(rng);
      const BlochVector rho = testing::random_bloch(rng);
      const Eigen::Vector3d direct = jc::expectations_analytic(t, p, rho).as_vector();
      const Eigen::Vector3d affine = jc::analytic_M(t, p).map.apply(rho.as_vector());
      CHECK((direct - affine).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, a2));
    }
  }
}

TEST_CASE("analytic vs oracle on a 200-point grid, |alpha|^2 = 1") {
  const jc::JCParams p = fig_params(1.0);
  const oracle::JCOracle orc(oracle::reference_params(p));
  double worst = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = k;
    for (const BlochVector& rho : {BlochVector{0.3, -0.5, 0.2}, BlochVector{0, 0, 1}}) {
      worst = std::max(worst, rel_dev(jc::expectations_analytic(t, p, rho).as_vector(),
                                      orc.expectations(t, rho).as_vector()));
    }
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("determinant series matches the oracle, alpha = 1, n_max = 30") {
  const jc::JCParams p = fig_params(1.0, 30);
  const oracle::JCOracle orc(p);
  double gap = 0.0, scale = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = 2.0 * k;
    const double a = jc::analytic_M(t, p).determinant;
    const double o = oracle_map(orc, t).matrix.determinant();
    gap = std::max(gap, std::abs(a - o));
    scale = std::max(scale, std::abs(o));
  }
  CHECK(gap / scale < 1e-7);
}

TEST_CASE("lambda1 -> 0: the series stays finite and exact") {
  // The uncorrected <a^dag a sigma_+> block carries (1 - 1/lambda1) factors; the
  // map is affine in the Bloch vector so nothing diverges at the south pole.
  const jc::JCParams p = fig_params(4.0);
  const oracle::JCOracle orc(oracle::reference_params(p));
  for (const BlochVector& rho : {BlochVector{0, 0, -1}, BlochVector{0.01, 0.0, -0.9999}}) {
    for (double t : {4.0, 25.0, 90.0}) {
      const auto a = jc::expectations_analytic(t, p, rho).as_vector();
      CHECK(a.allFinite());
      CHECK(rel_dev(a, orc.expectations(t, rho).as_vector()) < 1e-9);
    }
  }
}

TEST_CASE("direct determinant vs triple sum, random configurations") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ut(0.0, 200.0), ug(0.02, 0.3), uw(0.0, 0.3), ua(0.5, 3.0);
  for (int k = 0; k < 50; ++k) {
    const jc::JCParams p = jc::JCParams::make(ug(rng), uw(rng), ua(rng));
    const double t = ut(rng);
    CHECK(std::abs(jc::analytic_M(t, p).determinant - jc::triple_sum_determinant(t, p)) < 1e-9);
  }
}

TEST_CASE("Fig. 1 shape") {
  std::vector<double> grid;
  for (int k = 1; k <= 2000; ++k) grid.push_back(0.1 * k);
  double prev = 0.0;
  for (double a2 : {1.0, 4.0, 9.0}) {
    const auto d = jc::determinant_series(fig_params(a2), grid);
    CHECK(std::abs(d.front()) < 1e-3);
    double peak = 0.0;
    for (double v : d) peak = std::max(peak, std::abs(v));
    CHECK(peak > prev);
    prev = peak;
  }
  CHECK(std::abs(jc::analytic_M(0.0, fig_params(9.0)).determinant) < 1e-14);
}

TEST_CASE("truncation convergence 30 -> 40 at |alpha|^2 = 9") {
  std::vector<double> grid;
  for (int k = 1; k <= 2000; ++k) grid.push_back(0.1 * k);
  const auto d30 = jc::determinant_series(fig_params(9.0, 30), grid);
  const auto d40 = jc::determinant_series(fig_params(9.0, 40), grid);
  double gap = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    gap = std::max(gap, std::abs(d30[k] - d40[k]));
    scale = std::max(scale, std::abs(d40[k]));
  }
  CHECK(gap / scale < 1e-7);
}

TEST_CASE("reconstruct_initial") {
  const jc::JCParams p = fig_params(4.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ut(0.5, 200.0);
  double worst = 0.0;
  int done = 0;
  while (done < 500) {
    const double t = ut(rng);
    const auto sys = jc::analytic_M(t, p);
    if (std::abs(sys.determinant) <= 1e-3) continue;
    const BlochVector rho = testing::random_bloch(rng);
    const auto y = jc::expectations_analytic(t, p, rho);
    const auto rec = jc::reconstruct_initial(y, sys);
    worst = std::max(worst, (rec.rho.as_vector() - rho.as_vector()).norm());
    CHECK(rec.condition_number >= 1.0);
    ++done;
  }
  CHECK(worst < 1e-8);

  // Offset-only signal at small t: no transverse content.
  const auto early = jc::analytic_M(1.0, p);
  const auto r = jc::reconstruct_initial(jc::ExpectationTriple::from_vector(early.b()), early);
  CHECK(std::hypot(r.rho.rho1, r.rho.rho2) < 1e-8);
}

TEST_CASE("reconstruct_initial refuses a determinant zero crossing") {
  const jc::JCParams p = fig_params(4.0);
  // Bracket a sign change of Delta(t) and bisect onto it.
  double lo = 0.0, hi = 0.0;
  double prev = jc::analytic_M(1.0, p).determinant;
  for (double t = 1.1; t < 200.0; t += 0.1) {
    const double d = jc::analytic_M(t, p).determinant;
    if (d * prev < 0.0) {
      lo = t - 0.1;
      hi = t;
      break;
    }
    prev = d;
  }
  REQUIRE(hi > 0.0);
  double d_lo = jc::analytic_M(lo, p).determinant;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double d = jc::analytic_M(mid, p).determinant;
    if (d * d_lo > 0.0) {
      lo = mid;
      d_lo = d;
    } else {
      hi = mid;
    }
  }
  const auto sys = jc::analytic_M(0.5 * (lo + hi), p);
  CHECK(std::abs(sys.determinant) < 1e-6);
  CHECK_THROWS_AS(jc::reconstruct_initial(jc::ExpectationTriple{}, sys), IllConditioned);
}

TEST_CASE("triplet ranks") {
  const jc::JCParams p = fig_params(1.0);
  const auto z = jc::singular_triplet_check(10.0, p, jc::Triplet::sigma_z);
  CHECK(z.rank <= 2);
  const auto x = jc::singular_triplet_check(10.0, p, jc::Triplet::sigma_x);
  CHECK(std::abs(jc::analytic_M(10.0, p).determinant) > 1e-3);
  CHECK(x.rank == 3);
  // Oracle sensitivity equals analytic M for the sigma_x triplet.
  CHECK((x.sensitivity - jc::analytic_M(10.0, p).M()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(jc::singular_triplet_check(0.0, p, jc::Triplet::sigma_z).rank == 1);
  CHECK(jc::singular_triplet_check(0.0, p, jc::Triplet::sigma_x).rank == 1);
}
