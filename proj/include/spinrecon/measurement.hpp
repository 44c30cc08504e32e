#pragma once

#include "spinrecon/coherent_assistant.hpp"
#include "spinrecon/outcomes.hpp"
#include "spinrecon/spin_assistant.hpp"

#include <cstdint>
#include <map>

namespace spinrecon::measure {

// Name of the generator behind sample(); seeds are 64-bit.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

struct ShotRecord {
  std::map<JointOutcome, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double normalization_deficit = 0.0;  // 1 - sum p of the sampled distribution
};

// Multinomial draw by sequential conditional binomials. The distribution must
// sum to 1 within 1e-9; it is renormalized before drawing.
ShotRecord sample(const JointDistribution& distribution, std::uint64_t shots, std::uint64_t seed);

// Plug-in moments of (i, k, i k) with the covariance of those means.
struct TripleEstimate {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  std::uint64_t shots = 0;

  Eigen::Vector3d standard_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }
};

TripleEstimate estimate_triple(const ShotRecord& record);
// Same moments from exact probabilities; covariance left at zero.
TripleEstimate exact_triple(const JointDistribution& distribution);

struct ReconstructionReport {
  BlochVector estimate;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double condition_number = 0.0;
  double residual = 0.0;     // spin scheme only: fourth-probability check
  double determinant = 0.0;
  bool physical = true;      // |estimate| <= 1; estimates are never clipped
};

// x = M^{-1}(y - b), covariance M^{-1} Sigma_y M^{-T}.
ReconstructionReport reconstruct(const TripleEstimate& y, const AffineMap& map,
                                 double determinant, double det_floor);

ReconstructionReport reconstruct_from_shots(const ShotRecord& record,
                                            const jc::ReconstructionSystem& system,
                                            double det_floor = kDefaultDeterminantFloor);
ReconstructionReport reconstruct_from_shots(const ShotRecord& record,
                                            const spin::SpinScheme& scheme,
                                            double det_floor = kDefaultDeterminantFloor);

// Opt-in radial shrink onto the Bloch ball.
BlochVector project_to_ball(const BlochVector& v);

}  // namespace spinrecon::measure
