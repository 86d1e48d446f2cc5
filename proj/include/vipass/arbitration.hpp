#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "vipass/impedance.hpp"

namespace vipass {

/// Wrench distribution N(mean, covariance) proposed by one controller.
struct GaussianWrench {
  Wrench mean;
  Mat6 covariance = Mat6::Identity();
};

/// Matrix-valued arbitration weight. Not necessarily symmetric.
using ScalingMatrix = Mat6;

struct StiffnessDecomposition {
  Mat6 symmetric = Mat6::Zero();
  Mat6 skew = Mat6::Zero();
};

class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FusionResult {
  GaussianWrench fused;
  std::vector<ScalingMatrix> scalings;
};

/// Largest covariance condition number accepted by the fusion.
inline constexpr double kMaxCovarianceCondition = 1e12;

/// Product of Gaussians: Sigma = (sum Sigma_i^-1)^-1,
/// mean = Sigma sum Sigma_i^-1 mu_i, S_i = Sigma Sigma_i^-1.
/// Throws ContractViolation on an empty or non-SPD input and IllConditioned
/// when a covariance condition number exceeds kMaxCovarianceCondition.
FusionResult gaussian_product(std::span<const GaussianWrench> inputs);

/// Only the scaling factors S_i of the product above.
std::vector<ScalingMatrix> scaling_factors(std::span<const Mat6> covariances);

/// K' with S R J^T K = R J^T K', i.e. K' = (J^T)^-1 R^-1 S R J^T K.
/// Throws ChartSingularity where the chart Jacobian is not invertible.
StiffnessMatrix scaling_to_stiffness(const ScalingMatrix& s, const ManifoldChart& chart, const Pose& ee_pose,
                                     const StiffnessMatrix& k_p);

/// Same, given the chart's wrench map T = R J^T directly: K' = T^-1 S T K.
StiffnessMatrix scaling_to_stiffness(const ScalingMatrix& s, const Mat6& wrench_map, const StiffnessMatrix& k_p);

StiffnessDecomposition symmetrize_split(const StiffnessMatrix& k);

/// Nearest positive semidefinite matrix (negative eigenvalues set to zero).
Mat6 project_psd(const Mat6& k_sym);

}  // namespace vipass
