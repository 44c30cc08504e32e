#include "spinrecon/measurement.hpp"

#include "spinrecon/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace spinrecon::measure {

ShotRecord sample(const JointDistribution& distribution, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw InvalidArgument("shots must be positive");
  const auto& p = distribution.probabilities;
  if (p.empty() || p.size() != distribution.outcomes.size()) {
    throw InvalidArgument("distribution outcomes and probabilities disagree");
  }
  double total = 0.0;
  for (double q : p) {
    if (!(q >= -1e-12)) throw InvalidArgument("negative probability in distribution");
    total += std::max(q, 0.0);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("distribution sums to " + std::to_string(total) + ", not 1");
  }

  ShotRecord record;
  record.shots = shots;
  record.seed = seed;
  record.normalization_deficit = 1.0 - total;

  std::mt19937_64 rng(seed);
  std::uint64_t remaining = shots;
  double mass_left = total;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double q = std::max(p[j], 0.0);
    std::uint64_t drawn = 0;
    if (j + 1 == p.size()) {
      drawn = remaining;
    } else if (remaining > 0 && q > 0.0) {
      const double cond = std::clamp(q / mass_left, 0.0, 1.0);
      drawn = std::binomial_distribution<std::uint64_t>(remaining, cond)(rng);
    }
    mass_left -= q;
    remaining -= drawn;
    if (drawn > 0) record.counts[distribution.outcomes[j]] += drawn;
  }
  return record;
}

namespace {

Eigen::Vector3d features(const JointOutcome& o) {
  return {static_cast<double>(o.i), static_cast<double>(o.k), static_cast<double>(o.i) * o.k};
}

}  // namespace

TripleEstimate estimate_triple(const ShotRecord& record) {
  if (record.shots == 0) throw InvalidArgument("shot record is empty");
  TripleEstimate est;
  est.shots = record.shots;
  const double n = static_cast<double>(record.shots);
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
  std::uint64_t seen = 0;
  for (const auto& [outcome, count] : record.counts) {
    const Eigen::Vector3d f = features(outcome);
    est.mean += (count / n) * f;
    second += (count / n) * f * f.transpose();
    seen += count;
  }
  if (seen != record.shots) throw InvalidArgument("counts do not sum to the shot total");
  // Covariance of the sample mean.
  est.covariance = (second - est.mean * est.mean.transpose()) / n;
  return est;
}

TripleEstimate exact_triple(const JointDistribution& distribution) {
  TripleEstimate est;
  for (std::size_t j = 0; j < distribution.outcomes.size(); ++j) {
    est.mean += distribution.probabilities[j] * features(distribution.outcomes[j]);
  }
  return est;
}

ReconstructionReport reconstruct(const TripleEstimate& y, const AffineMap& map,
                                 double determinant, double det_floor) {
  const Eigen::Vector3d x = solve_affine(map, y.mean, det_floor);
  const Eigen::Matrix3d inv = map.matrix.inverse();
  ReconstructionReport report;
  report.estimate = BlochVector::from_vector(x);
  report.covariance = inv * y.covariance * inv.transpose();
  report.covariance = 0.5 * (report.covariance + report.covariance.transpose()).eval();
  report.condition_number = condition_number(map.matrix);
  report.determinant = determinant;
  report.physical = report.estimate.is_physical();
  return report;
}

ReconstructionReport reconstruct_from_shots(const ShotRecord& record,
                                            const jc::ReconstructionSystem& system,
                                            double det_floor) {
  return reconstruct(estimate_triple(record), system.map, system.determinant, det_floor);
}

ReconstructionReport reconstruct_from_shots(const ShotRecord& record,
                                            const spin::SpinScheme& scheme, double det_floor) {
  if (!(std::abs(scheme.determinant) > det_floor)) {
    throw IllConditioned("spin mapping determinant below floor", scheme.determinant);
  }
  ReconstructionReport report =
      reconstruct(estimate_triple(record), spin::expectation_map(scheme), scheme.determinant,
                  det_floor);
  spin::Probabilities freq{};
  for (int a = 0; a < spin::kOutcomes; ++a) {
    const auto it = record.counts.find({spin::kSystemSign[a], spin::kAssistantSign[a]});
    freq[a] = it == record.counts.end() ? 0.0
                                        : static_cast<double>(it->second) / record.shots;
  }
  report.residual = spin::reconstruct_bloch(scheme, freq, det_floor).residual;
  return report;
}

BlochVector project_to_ball(const BlochVector& v) {
  const double n = v.norm();
  if (n <= 1.0) return v;
  return BlochVector::from_vector(v.as_vector() / n);
}

}  // namespace spinrecon::measure
