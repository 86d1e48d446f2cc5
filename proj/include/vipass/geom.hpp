#pragma once

// Geometry on R^3 x SO(3).
//
// Convention: every tangent quantity (pose error, twist, wrench) is expressed
// in the frame of the base pose, which for the controller is the end
// effector. log_map(base, target) therefore returns the target as seen from
// base, and exp_map walks from base along a body-frame increment.

#include <Eigen/Geometry>

#include "vipass/types.hpp"

namespace vipass {

class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  /// Normalizes; throws ContractViolation on a zero or non-finite input.
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Eigen::Quaterniond& q);

  static UnitQuaternion Identity() { return {}; }
  static UnitQuaternion from_rotation_vector(const Vec3& phi);
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }
  const Eigen::Quaterniond& eigen() const { return q_; }

  UnitQuaternion inverse() const;
  UnitQuaternion operator*(const UnitQuaternion& o) const;
  Vec3 rotate(const Vec3& v) const { return q_ * v; }
  Mat3 matrix() const { return q_.toRotationMatrix(); }

  /// Shortest-arc rotation vector, norm in [0, pi]. q and -q give the same
  /// result; at exactly pi the sign is fixed so the dominant vector
  /// component is positive (first index wins ties).
  Vec3 rotation_vector() const;

  /// Equality as rotations (q == -q).
  bool same_rotation(const UnitQuaternion& o, double tol = 1e-12) const;

 private:
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

struct Pose {
  Vec3 position = Vec3::Zero();
  UnitQuaternion orientation;

  static Pose Identity() { return {}; }
};

/// Pose of target seen from base, in base coordinates.
TangentError log_map(const Pose& base, const Pose& target);

/// Inverse of log_map for rotation increments below pi.
Pose exp_map(const Pose& base, const TangentError& delta);

/// Velocity of a pose sampled at two instants, in the frame of `current`.
/// Throws ContractViolation for dt <= 0.
Twist finite_difference_twist(const Pose& current, const Pose& previous, double dt);

/// Cross-product matrix: skew(a) b = a x b.
Mat3 skew(const Vec3& a);

/// Inverse left Jacobian of SO(3): log(exp(e) exp(phi)) = phi + J_l^-1(phi) e
/// to first order in e. Valid for |phi| < pi.
Mat3 so3_left_jacobian_inverse(const Vec3& phi);

/// Block-diagonal 6x6 rotation diag(R, R).
Mat6 spatial_rotation(const Mat3& r);

/// 6x6 map re-expressing a tangent vector given in frame `from` into frame
/// `to` (both as world orientations).
Mat6 reexpress(const UnitQuaternion& from, const UnitQuaternion& to);

}  // namespace vipass
