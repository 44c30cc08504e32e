#include "spinrecon/coherent_assistant.hpp"

#include "spinrecon/errors.hpp"
#include "spinrecon/oracle.hpp"

#include <cmath>
#include <numbers>

namespace spinrecon::jc {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_nonzero_alpha(const JCParams& params) {
  if (params.alpha == Complex(0.0, 0.0)) {
    throw InvalidArgument("the coherent-assistant formulas need alpha != 0");
  }
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
}

struct Trig {
  double c0, s0, c1, s1, r0, r1;
};

Trig trig(int n, double t, double gamma) {
  const double r0 = std::sqrt(static_cast<double>(n));
  const double r1 = std::sqrt(n + 1.0);
  return {std::cos(gamma * r0 * t), std::sin(gamma * r0 * t), std::cos(gamma * r1 * t),
          std::sin(gamma * r1 * t), r0, r1};
}

// <sigma_+(t)> term for index n: (offset, lambda1, lambda2, lambda2*).
Eigen::Vector4cd sigma_plus_term(int n, double t, const JCParams& p) {
  const auto [c0, s0, c1, s1, r0, r1] = trig(n, t, p.gamma);
  const Complex e = std::exp(kI * (p.omega * t));
  const Complex a = p.alpha;
  const Complex ac = std::conj(a);
  Eigen::Vector4cd out;
  out[0] = kI * e * ac * s1 * c0 / r1;
  out[1] = -kI * e * (r0 * c1 * s0 / a + ac * c0 * s1 / r1);
  out[2] = e * c1 * c0;
  out[3] = e * (ac / a) * (r0 / r1) * s1 * s0;
  return out;
}

// <a^dag a(t)> term, with n p_n = |a|^2 p_{n-1} applied to the number part.
Eigen::Vector4cd number_term(int n, double t, const JCParams& p) {
  const auto [c0, s0, c1, s1, r0, r1] = trig(n, t, p.gamma);
  const double m = p.mean_photons();
  const Complex a = p.alpha;
  Eigen::Vector4cd out;
  out[0] = m * (1.0 - s1 * s1 / (n + 1.0));
  out[1] = s1 * s1 + m * s1 * s1 / (n + 1.0);
  out[2] = kI * a * s1 * c1 / r1;
  out[3] = std::conj(out[2]);
  return out;
}

// Converts (offset, lambda1, lambda2, lambda2*) of a complex observable O to
// a Bloch-coordinate row of scale * Re<O>.
Eigen::RowVector3d to_bloch_row(const Eigen::Vector4cd& c, double scale, double& offset) {
  Eigen::RowVector3d row;
  row[0] = scale * (0.5 * (c[2] + c[3])).real();
  row[1] = scale * (0.5 * kI * (c[2] - c[3])).real();
  row[2] = scale * (0.5 * c[1]).real();
  offset = scale * (c[0] + 0.5 * c[1]).real();
  return row;
}

}  // namespace

DressedCoefficients coefficients(int n, double t, const JCParams& params) {
  if (n < 0) throw InvalidArgument("dressed index n must be >= 0");
  require_time(t);
  const double r0 = std::sqrt(static_cast<double>(n));
  const double r1 = std::sqrt(n + 1.0);
  const double g = params.gamma;
  DressedCoefficients d;
  d.n = n;
  d.f_plus = std::exp(kI * ((g * r0 - params.omega) * t));
  d.f_minus = std::exp(kI * ((-g * r0 - params.omega) * t));
  d.s = kI * (std::sin(g * r1 * t) / r1);
  d.g_plus = std::cos(g * r1 * t) + r0 * d.s;
  d.g_minus = std::cos(g * r1 * t) - r0 * d.s;
  return d;
}

std::vector<DressedState> dressed_basis(const FockSpace& space) {
  const Eigen::Index dim = 2 * space.dim();
  std::vector<DressedState> basis;
  basis.reserve(static_cast<std::size_t>(dim));

  DressedState ground{0, 0, false, Vector::Zero(dim)};
  ground.state[joint_index(1, 0, space)] = 1.0;
  basis.push_back(std::move(ground));

  for (int n = 1; n <= space.n_max; ++n) {
    for (int sign : {+1, -1}) {
      DressedState d{n, sign, false, Vector::Zero(dim)};
      d.state[joint_index(0, n - 1, space)] = 1.0 / std::numbers::sqrt2;
      d.state[joint_index(1, n, space)] = sign / std::numbers::sqrt2;
      basis.push_back(std::move(d));
    }
  }

  DressedState top{space.n_max + 1, 0, true, Vector::Zero(dim)};
  top.state[joint_index(0, space.n_max, space)] = 1.0;
  basis.push_back(std::move(top));
  return basis;
}

Eigen::Matrix3cd uncorrected_A(int n, double t, const JCParams& params) {
  require_nonzero_alpha(params);
  if (n < 0) throw InvalidArgument("series index n must be >= 0");
  const auto [c0, s0, c1, s1, r0, r1] = trig(n, t, params.gamma);
  const Complex e = std::exp(kI * (params.omega * t));
  const Complex a = params.alpha;
  const double m = params.mean_photons();

  Eigen::Matrix3cd A;
  A(0, 0) = -kI * e / a * (r0 * c1 * s0 + m * c0 * s1 / r1);
  A(0, 1) = kI * e * r0 / (a * r1) * s1 * s0;
  A(0, 2) = e * c1 * c0;
  A(1, 0) = ((1.0 + 2.0 * n) * (1.0 + n - m) -
             (1.0 + n + m) * std::cos(2.0 * params.gamma * r1 * t)) /
            (2.0 * (n + 1.0));
  A(1, 1) = kI * a * c1 * s0 / r1;
  A(1, 2) = std::conj(A(1, 1));
  A(2, 0) = static_cast<double>(n) * A(0, 0);
  A(2, 1) = static_cast<double>(n) * A(0, 2);
  A(2, 2) = static_cast<double>(n) * A(0, 1);
  return A;
}

SeriesTerm corrected_term(int n, double t, const JCParams& params) {
  require_nonzero_alpha(params);
  require_time(t);
  if (n < 0) throw InvalidArgument("series index n must be >= 0");
  const Eigen::Vector4cd rows[3] = {sigma_plus_term(n, t, params), number_term(n, t, params),
                                    params.mean_photons() * sigma_plus_term(n + 1, t, params)};
  SeriesTerm term;
  for (int r = 0; r < 3; ++r) {
    term.offset[r] = rows[r][0];
    term.lambda.row(r) = rows[r].tail<3>().transpose();
  }
  return term;
}

BlochTerm bloch_term(int n, double t, const JCParams& params) {
  const SeriesTerm s = corrected_term(n, t, params);
  BlochTerm out;
  const double scale[3] = {2.0, 1.0, 2.0};
  for (int r = 0; r < 3; ++r) {
    Eigen::Vector4cd c;
    c << s.offset[r], s.lambda(r, 0), s.lambda(r, 1), s.lambda(r, 2);
    out.matrix.row(r) = to_bloch_row(c, scale[r], out.offset[r]);
  }
  return out;
}

ReconstructionSystem analytic_M(double t, const JCParams& params) {
  const Eigen::VectorXd w = poisson_weights(params.mean_photons(), params.n_max);
  ReconstructionSystem sys;
  sys.t = t;
  sys.params = params;
  for (int n = 0; n <= params.n_max; ++n) {
    const BlochTerm term = bloch_term(n, t, params);
    sys.map.matrix += w[n] * term.matrix;
    sys.map.offset += w[n] * term.offset;
  }
  sys.determinant = sys.map.matrix.determinant();
  return sys;
}

double triple_sum_determinant(double t, const JCParams& params) {
  const Eigen::VectorXd w = poisson_weights(params.mean_photons(), params.n_max);
  std::vector<Eigen::Matrix3d> terms;
  terms.reserve(static_cast<std::size_t>(params.n_max + 1));
  for (int n = 0; n <= params.n_max; ++n) terms.push_back(bloch_term(n, t, params).matrix);

  double total = 0.0;
  for (int l = 0; l <= params.n_max; ++l) {
    const Eigen::RowVector3d r1 = terms[l].row(0);
    for (int m = 0; m <= params.n_max; ++m) {
      // eps_ijk r1_i r2_j r3_k = r3 . (r1 x r2)
      const Eigen::Vector3d cross = r1.transpose().cross(terms[m].row(1).transpose());
      double inner = 0.0;
      for (int n = 0; n <= params.n_max; ++n) inner += w[n] * terms[n].row(2).dot(cross);
      total += w[l] * w[m] * inner;
    }
  }
  return total;
}

std::vector<double> determinant_series(const JCParams& params, std::span<const double> times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(analytic_M(t, params).determinant);
  return out;
}

ExpectationTriple expectations_analytic(double t, const JCParams& params,
                                        const BlochVector& rho0) {
  require_nonzero_alpha(params);
  if (!rho0.is_physical()) throw UnphysicalState("initial Bloch vector is not physical");
  const Complex a = params.alpha;
  const Complex ac = std::conj(a);
  const double m = params.mean_photons();
  const double lambda1 = 0.5 * (1.0 + rho0.rho3);
  const Complex lambda2 = 0.5 * Complex(rho0.rho1, rho0.rho2);
  const Complex lambda2c = std::conj(lambda2);

  // <sigma_+(t)> contribution of dressed index n.
  auto sigma_plus = [&](const DressedCoefficients& d) {
    const double rn = std::sqrt(static_cast<double>(d.n));
    const Complex fd = 0.5 * (std::conj(d.f_plus) - std::conj(d.f_minus));
    const Complex fs = 0.5 * (std::conj(d.f_plus) + std::conj(d.f_minus));
    const Complex gs = 0.5 * (d.g_plus + d.g_minus);
    return ac * d.s * fs + (rn / a * fd * gs - ac * d.s * fs) * lambda1 + fs * gs * lambda2 +
           (ac / a) * rn * d.s * fd * lambda2c;
  };

  const Eigen::VectorXd w = poisson_weights(m, params.n_max);
  Complex sp = 0.0, num = 0.0, nsp = 0.0;
  for (int n = 0; n <= params.n_max; ++n) {
    const DressedCoefficients d = coefficients(n, t, params);
    const DressedCoefficients next = coefficients(n + 1, t, params);
    const double s2 = std::norm(d.s);
    const Complex gs = 0.5 * (d.g_plus + d.g_minus);
    const Complex number_coherence = a * d.s * gs;

    sp += w[n] * sigma_plus(d);
    num += w[n] * (m * (1.0 - s2) + ((n + 1.0) * s2 + m * s2) * lambda1 +
                   number_coherence * lambda2 + std::conj(number_coherence) * lambda2c);
    nsp += w[n] * m * sigma_plus(next);
  }
  return {2.0 * sp.real(), num.real(), 2.0 * nsp.real()};
}

InitialReconstruction reconstruct_initial(const ExpectationTriple& y,
                                          const ReconstructionSystem& system, double det_floor) {
  const Eigen::Vector3d x = solve_affine(system.map, y.as_vector(), det_floor);
  return {BlochVector::from_vector(x), condition_number(system.map.matrix), system.determinant};
}

RankReport singular_triplet_check(double t, const JCParams& params, Triplet triplet,
                                  double tolerance) {
  const oracle::JCOracle orc(params);
  const auto& ops = orc.operators();
  const Matrix& spin = triplet == Triplet::sigma_x ? ops.sigma_x : ops.sigma_z;
  const std::array<Matrix, 3> observables{spin, ops.number, spin * ops.number};

  RankReport report;
  report.triplet = triplet;
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[j] = 1.0;
    const Eigen::Vector3d up = orc.expectations(t, BlochVector::from_vector(e), observables);
    const Eigen::Vector3d down = orc.expectations(t, BlochVector::from_vector(-e), observables);
    report.sensitivity.col(j) = 0.5 * (up - down);
  }
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(report.sensitivity);
  report.singular_values = svd.singularValues();
  report.rank = static_cast<int>((report.singular_values.array() > tolerance).count());
  return report;
}

}  // namespace spinrecon::jc
