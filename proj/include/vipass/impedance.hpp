#pragma once

#include <stdexcept>

#include "vipass/geom.hpp"

namespace vipass {

using StiffnessMatrix = Mat6;
using DampingMatrix = Mat6;

/// w = K_p dx + K_d dv, all in the same (chart) coordinates.
Wrench impedance_wrench(const StiffnessMatrix& k_p, const DampingMatrix& k_d, const TangentError& dx,
                        const Twist& dv);

/// Damping by simultaneous diagonalization of (M, K): with M = Q^T Q and
/// K = Q^T diag(k_j) Q, returns K_d = Q^T diag(2 xi sqrt(k_j)) Q.
/// Eigenvalues of the result are raised to at least `min_eigenvalue`.
/// K must be symmetric (pass the symmetrized part); throws ContractViolation
/// otherwise, or for xi outside (0, 1].
DampingMatrix double_diagonalization_damping(const Mat6& mass, const StiffnessMatrix& k_sym, double xi,
                                             double min_eigenvalue = 0.0);

/// Thrown when a chart is evaluated inside its singular set.
class ChartSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinates an attractor's spring lives in. Cartesian is the identity
/// chart on R^3 x SO(3). Cylindrical replaces the linear part by
/// (radius, azimuth, height) about the z axis of `frame`; the angular part
/// stays the end-effector rotation vector.
struct ManifoldChart {
  enum class Kind { Cartesian, Cylindrical };

  Kind kind = Kind::Cartesian;
  Pose frame;           // cylinder origin and orientation (z = axis)
  double r_min = 0.01;  // singular set: radius below r_min

  static ManifoldChart Cartesian() { return {}; }
  static ManifoldChart Cylindrical(const Pose& frame, double r_min = 0.01) {
    return {Kind::Cylindrical, frame, r_min};
  }
};

/// Chart Jacobian J_M (chart velocity per chart-frame Cartesian velocity).
Mat6 chart_jacobian(const ManifoldChart& chart, const Pose& ee_pose);

/// Rotation R_M taking chart-frame Cartesian vectors into the end-effector
/// frame.
Mat6 chart_rotation(const ManifoldChart& chart, const Pose& ee_pose);

/// T = R_M J_M^T: maps a chart wrench to an end-effector Cartesian wrench.
/// Its transpose maps end-effector twists to chart velocities.
Mat6 chart_wrench_map(const ManifoldChart& chart, const Pose& ee_pose);

Wrench manifold_wrench_transform(const ManifoldChart& chart, const Pose& ee_pose, const Wrench& w_manifold);

/// Chart coordinates of a pose (cylindrical: r, theta, z; Cartesian:
/// position). Angular part is not included.
Vec3 chart_coordinates(const ManifoldChart& chart, const Vec3& position);

/// Spring deflection from the end effector to the attractor in chart
/// coordinates. Cartesian: log_map(ee, attractor). Cylindrical: differences
/// of (r, theta wrapped to (-pi, pi], z) plus the orientation log.
TangentError chart_deflection(const ManifoldChart& chart, const Pose& ee_pose, const Pose& attractor);

/// Rate of chart_deflection with respect to the end-effector body twist,
/// the attractor held fixed: d/dt dx = A v_ee. `dx` is the current
/// deflection. The rotational block is -J_l^-1(dx_angular); in the
/// Cartesian chart the translational deflection, being expressed in the
/// rotating end-effector frame, also picks up dx_linear x omega.
/// -A^T is the wrench map under which the spring 1/2 dx^T K dx is
/// conservative.
Mat6 deflection_jacobian(const ManifoldChart& chart, const Pose& ee_pose, const TangentError& dx);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace vipass
