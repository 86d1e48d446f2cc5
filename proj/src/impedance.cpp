#include "vipass/impedance.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace vipass {

Wrench impedance_wrench(const StiffnessMatrix& k_p, const DampingMatrix& k_d, const TangentError& dx,
                        const Twist& dv) {
  return Wrench(Vec6(k_p * dx.value + k_d * dv.value));
}

DampingMatrix double_diagonalization_damping(const Mat6& mass, const StiffnessMatrix& k_sym, double xi,
                                             double min_eigenvalue) {
  if (!(xi > 0.0 && xi <= 1.0)) throw ContractViolation("double_diagonalization_damping: xi must be in (0, 1]");
  if (!is_symmetric(k_sym, 1e-9)) {
    throw ContractViolation("double_diagonalization_damping: stiffness must be symmetric");
  }
  const Mat6 k = symmetric_part(k_sym);

  // K v = lambda M v with V^T M V = I, so M = V^-T V^-1 and K = V^-T L V^-1.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> ges(k, mass);
  const Mat6& v = ges.eigenvectors();
  Vec6 modal = ges.eigenvalues().cwiseMax(0.0).cwiseSqrt() * (2.0 * xi);
  const Mat6 mv = mass * v;
  Mat6 k_d = symmetric_part(mv * modal.asDiagonal() * mv.transpose());

  if (min_eigenvalue > 0.0) {
    Eigen::SelfAdjointEigenSolver<Mat6> es(k_d);
    if (es.eigenvalues().minCoeff() < min_eigenvalue) {
      const Vec6 floored = es.eigenvalues().cwiseMax(min_eigenvalue);
      k_d = symmetric_part(es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().transpose());
    }
  }
  return k_d;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

namespace {

Vec3 in_chart_frame(const ManifoldChart& chart, const Vec3& position) {
  return chart.frame.orientation.inverse().rotate(position - chart.frame.position);
}

}  // namespace

Vec3 chart_coordinates(const ManifoldChart& chart, const Vec3& position) {
  if (chart.kind == ManifoldChart::Kind::Cartesian) return position;
  const Vec3 l = in_chart_frame(chart, position);
  const double r = std::hypot(l.x(), l.y());
  if (r < chart.r_min) throw ChartSingularity("cylindrical chart: radius below r_min");
  return {r, std::atan2(l.y(), l.x()), l.z()};
}

Mat6 chart_jacobian(const ManifoldChart& chart, const Pose& ee_pose) {
  Mat6 j = Mat6::Identity();
  if (chart.kind == ManifoldChart::Kind::Cartesian) return j;
  const Vec3 l = in_chart_frame(chart, ee_pose.position);
  const double r = std::hypot(l.x(), l.y());
  if (r < chart.r_min) throw ChartSingularity("cylindrical chart: radius below r_min");
  const double r2 = r * r;
  j.topLeftCorner<3, 3>() << l.x() / r, l.y() / r, 0.0,
                             -l.y() / r2, l.x() / r2, 0.0,
                             0.0, 0.0, 1.0;
  return j;
}

Mat6 chart_rotation(const ManifoldChart& chart, const Pose& ee_pose) {
  Mat6 r = Mat6::Identity();
  if (chart.kind == ManifoldChart::Kind::Cartesian) return r;
  r.topLeftCorner<3, 3>() = ee_pose.orientation.matrix().transpose() * chart.frame.orientation.matrix();
  return r;
}

Mat6 chart_wrench_map(const ManifoldChart& chart, const Pose& ee_pose) {
  if (chart.kind == ManifoldChart::Kind::Cartesian) return Mat6::Identity();
  return chart_rotation(chart, ee_pose) * chart_jacobian(chart, ee_pose).transpose();
}

Wrench manifold_wrench_transform(const ManifoldChart& chart, const Pose& ee_pose, const Wrench& w_manifold) {
  return Wrench(Vec6(chart_wrench_map(chart, ee_pose) * w_manifold.value));
}

TangentError chart_deflection(const ManifoldChart& chart, const Pose& ee_pose, const Pose& attractor) {
  const TangentError cart = log_map(ee_pose, attractor);
  if (chart.kind == ManifoldChart::Kind::Cartesian) return cart;
  const Vec3 ce = chart_coordinates(chart, ee_pose.position);
  const Vec3 ca = chart_coordinates(chart, attractor.position);
  const Vec3 lin(ca.x() - ce.x(), wrap_angle(ca.y() - ce.y()), ca.z() - ce.z());
  return TangentError(lin, cart.angular());
}

Mat6 deflection_jacobian(const ManifoldChart& chart, const Pose& ee_pose, const TangentError& dx) {
  Mat6 a = Mat6::Zero();
  if (chart.kind == ManifoldChart::Kind::Cartesian) {
    a.topLeftCorner<3, 3>() = -Mat3::Identity();
    a.topRightCorner<3, 3>() = skew(dx.linear());
  } else {
    a.topLeftCorner<3, 3>() = -chart_wrench_map(chart, ee_pose).topLeftCorner<3, 3>().transpose();
  }
  a.bottomRightCorner<3, 3>() = -so3_left_jacobian_inverse(dx.angular());
  return a;
}

}  // namespace vipass
