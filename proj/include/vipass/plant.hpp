#pragma once

#include <optional>
#include <stdexcept>

#include "vipass/geom.hpp"

namespace vipass {

/// Unilateral penalty wall. The free half-space is {p : normal . p >= offset}
/// in world coordinates.
struct Wall {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
  double stiffness = 1e5;  // N/m
  double damping = 0.0;    // N s/m
};

struct PlantParams {
  Mat6 mass = Mat6::Identity();
  Mat6 damping = Mat6::Zero();
  double dt = 1e-3;
  std::optional<Wall> wall;

  /// Default floating body: 5 kg, 0.2 kg m^2, light viscous damping.
  static PlantParams Default(double dt = 1e-3);

  /// Throws ContractViolation unless M is SPD, D is symmetric PSD, dt > 0.
  void validate() const;
};

struct PlantState {
  Pose pose;
  Twist twist;  // end-effector frame
  double time = 0.0;
};

/// Raised when the integrator produces a non-finite state.
class PlantFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One semi-implicit Euler step of M a = w_ctrl + w_ext + w_wall - D v.
/// All wrenches are in the end-effector frame; the wall term is computed
/// internally from `state`.
PlantState plant_step(const PlantState& state, const PlantParams& params, const Wrench& total_wrench,
                      const Wrench& external_wrench);

/// Same step with an additional velocity feedback -B v' evaluated at the new
/// twist: (M + B dt) v' = M v + (w_ctrl + w_ext + w_wall - D v) dt. B = 0
/// reproduces plant_step exactly.
PlantState plant_step(const PlantState& state, const PlantParams& params, const Wrench& total_wrench,
                      const Wrench& external_wrench, const Mat6& velocity_feedback);

/// Penalty contact wrench in the end-effector frame. Zero outside the wall;
/// never pulls the body into the wall.
Wrench wall_wrench(const PlantState& state, const Wall& wall);

double kinetic_energy(const Twist& twist, const Mat6& mass);

/// First-order low-pass, y' = y + a (u - y), a = dt / (dt + 1/(2 pi fc)).
/// A cutoff of 0 disables filtering (output = input).
struct LowPassFilter {
  double cutoff_hz = 0.0;
  Vec6 state = Vec6::Zero();
};

Vec6 filter_step(LowPassFilter& filter, const Vec6& input, double dt);

}  // namespace vipass
