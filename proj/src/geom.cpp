#include "vipass/geom.hpp"

#include <cmath>

namespace vipass {

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) : q_(w, x, y, z) {
  const double n = q_.norm();
  if (!std::isfinite(n) || n < 1e-300) {
    throw ContractViolation("UnitQuaternion: zero or non-finite quaternion");
  }
  q_.coeffs() /= n;
}

UnitQuaternion::UnitQuaternion(const Eigen::Quaterniond& q)
    : UnitQuaternion(q.w(), q.x(), q.y(), q.z()) {}

UnitQuaternion UnitQuaternion::from_rotation_vector(const Vec3& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    // second-order accurate, renormalized by the constructor
    return {1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z()};
  }
  const double s = std::sin(0.5 * angle) / angle;
  return {std::cos(0.5 * angle), s * phi.x(), s * phi.y(), s * phi.z()};
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-300) throw ContractViolation("from_axis_angle: zero axis");
  return from_rotation_vector(axis / n * angle);
}

UnitQuaternion UnitQuaternion::inverse() const { return UnitQuaternion(q_.conjugate()); }

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
  return UnitQuaternion(q_ * o.q_);
}

Vec3 UnitQuaternion::rotation_vector() const {
  double w = q_.w();
  Vec3 v = q_.vec();
  if (w == 0.0) {
    // antipodal: pick the sign that makes the dominant component positive
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v[idx] < 0.0) v = -v;
    return M_PI * v.normalized();
  }
  if (w < 0.0) {
    w = -w;
    v = -v;
  }
  const double s = v.norm();
  if (s < 1e-8) {
    // angle/sin(angle/2) -> 2/w, error O(s^2)
    return (2.0 / w) * v;
  }
  const double angle = 2.0 * std::atan2(s, w);
  return (angle / s) * v;
}

bool UnitQuaternion::same_rotation(const UnitQuaternion& o, double tol) const {
  return std::abs(std::abs(q_.dot(o.q_)) - 1.0) <= tol;
}

TangentError log_map(const Pose& base, const Pose& target) {
  const Vec3 lin = base.orientation.inverse().rotate(target.position - base.position);
  const Vec3 ang = (base.orientation.inverse() * target.orientation).rotation_vector();
  return TangentError(lin, ang);
}

Pose exp_map(const Pose& base, const TangentError& delta) {
  Pose out;
  out.position = base.position + base.orientation.rotate(delta.linear());
  out.orientation = base.orientation * UnitQuaternion::from_rotation_vector(delta.angular());
  return out;
}

Twist finite_difference_twist(const Pose& current, const Pose& previous, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("finite_difference_twist: dt must be positive");
  const TangentError back = log_map(current, previous);
  return Twist(Vec6(-back.value / dt));
}

Mat6 spatial_rotation(const Mat3& r) {
  Mat6 out = Mat6::Zero();
  out.topLeftCorner<3, 3>() = r;
  out.bottomRightCorner<3, 3>() = r;
  return out;
}

Mat6 reexpress(const UnitQuaternion& from, const UnitQuaternion& to) {
  return spatial_rotation(to.matrix().transpose() * from.matrix());
}

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

Mat3 so3_left_jacobian_inverse(const Vec3& phi) {
  const double theta = phi.norm();
  const Mat3 k = skew(phi);
  // Coefficient of k^2; its series is 1/12 + theta^2/720 near zero.
  double c;
  if (theta < 1e-4) {
    c = 1.0 / 12.0 + theta * theta / 720.0;
  } else {
    c = 1.0 / (theta * theta) - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  return Mat3::Identity() - 0.5 * k + c * k * k;
}

}  // namespace vipass
