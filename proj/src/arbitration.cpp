#include "vipass/arbitration.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace vipass {

namespace {

// Inverse of an SPD covariance through its eigendecomposition, which also
// gives the condition number for free.
Mat6 checked_inverse(const Mat6& cov) {
  if (!is_symmetric(cov, 1e-9)) throw ContractViolation("covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat6> es(symmetric_part(cov));
  const Vec6& ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) throw ContractViolation("covariance is not positive definite");
  if (ev.maxCoeff() / ev.minCoeff() > kMaxCovarianceCondition) {
    throw IllConditioned("covariance condition number exceeds 1e12");
  }
  const Mat6& q = es.eigenvectors();
  return symmetric_part(q * ev.cwiseInverse().asDiagonal() * q.transpose());
}

}  // namespace

std::vector<ScalingMatrix> scaling_factors(std::span<const Mat6> covariances) {
  if (covariances.empty()) throw ContractViolation("scaling_factors: no inputs");
  std::vector<Mat6> info;
  info.reserve(covariances.size());
  Mat6 info_sum = Mat6::Zero();
  for (const auto& cov : covariances) {
    info.push_back(checked_inverse(cov));
    info_sum += info.back();
  }
  const Mat6 fused_cov = checked_inverse(symmetric_part(info_sum));
  std::vector<ScalingMatrix> out;
  out.reserve(info.size());
  for (const auto& p : info) out.push_back(fused_cov * p);
  return out;
}

FusionResult gaussian_product(std::span<const GaussianWrench> inputs) {
  if (inputs.empty()) throw ContractViolation("gaussian_product: no inputs");
  std::vector<Mat6> covs;
  covs.reserve(inputs.size());
  for (const auto& g : inputs) covs.push_back(g.covariance);

  FusionResult res;
  res.scalings = scaling_factors(covs);

  Mat6 info_sum = Mat6::Zero();
  for (const auto& c : covs) info_sum += checked_inverse(c);
  res.fused.covariance = checked_inverse(symmetric_part(info_sum));

  Vec6 mean = Vec6::Zero();
  for (std::size_t i = 0; i < inputs.size(); ++i) mean += res.scalings[i] * inputs[i].mean.value;
  res.fused.mean = Wrench(mean);
  return res;
}

StiffnessMatrix scaling_to_stiffness(const ScalingMatrix& s, const Mat6& wrench_map, const StiffnessMatrix& k_p) {
  Eigen::FullPivLU<Mat6> lu(wrench_map);
  if (!lu.isInvertible()) throw ChartSingularity("scaling_to_stiffness: chart map not invertible");
  return lu.solve(s * wrench_map * k_p);
}

StiffnessMatrix scaling_to_stiffness(const ScalingMatrix& s, const ManifoldChart& chart, const Pose& ee_pose,
                                     const StiffnessMatrix& k_p) {
  if (chart.kind == ManifoldChart::Kind::Cartesian) return s * k_p;
  return scaling_to_stiffness(s, chart_wrench_map(chart, ee_pose), k_p);
}

StiffnessDecomposition symmetrize_split(const StiffnessMatrix& k) {
  StiffnessDecomposition d;
  d.symmetric = 0.5 * (k + k.transpose());
  d.skew = 0.5 * (k - k.transpose());
  return d;
}

Mat6 project_psd(const Mat6& k_sym) {
  Eigen::SelfAdjointEigenSolver<Mat6> es(symmetric_part(k_sym));
  if (es.eigenvalues().minCoeff() >= 0.0) return symmetric_part(k_sym);
  const Mat6& q = es.eigenvectors();
  return symmetric_part(q * es.eigenvalues().cwiseMax(0.0).asDiagonal() * q.transpose());
}

}  // namespace vipass
