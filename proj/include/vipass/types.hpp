#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace vipass {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// 6-vector with a linear (head) and angular (tail) half. The tag keeps
/// twists, wrenches and pose errors from being mixed up silently.
template <class Tag>
struct Spatial {
  Vec6 value = Vec6::Zero();

  Spatial() = default;
  explicit Spatial(const Vec6& v) : value(v) {}
  Spatial(const Vec3& lin, const Vec3& ang) {
    value.head<3>() = lin;
    value.tail<3>() = ang;
  }

  static Spatial Zero() { return Spatial(); }

  auto linear() { return value.head<3>(); }
  auto linear() const { return value.head<3>(); }
  auto angular() { return value.tail<3>(); }
  auto angular() const { return value.tail<3>(); }

  bool allFinite() const { return value.allFinite(); }

  Spatial operator+(const Spatial& o) const { return Spatial(Vec6(value + o.value)); }
  Spatial operator-(const Spatial& o) const { return Spatial(Vec6(value - o.value)); }
  Spatial operator-() const { return Spatial(Vec6(-value)); }
  Spatial operator*(double s) const { return Spatial(Vec6(value * s)); }
  Spatial operator/(double s) const { return Spatial(Vec6(value / s)); }
  Spatial& operator+=(const Spatial& o) {
    value += o.value;
    return *this;
  }
};

struct TwistTag {};
struct WrenchTag {};
struct TangentTag {};

/// Linear [m/s] and angular [rad/s] velocity, end-effector frame.
using Twist = Spatial<TwistTag>;
/// Force [N] and torque [N m], end-effector frame.
using Wrench = Spatial<WrenchTag>;
/// Pose error: linear [m] and rotation vector [rad], end-effector frame.
using TangentError = Spatial<TangentTag>;

/// A caller broke an operation's documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Mat6 symmetric_part(const Mat6& k) { return 0.5 * (k + k.transpose()); }

inline bool is_symmetric(const Mat6& k, double tol) {
  return (k - k.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, k.cwiseAbs().maxCoeff());
}

}  // namespace vipass
