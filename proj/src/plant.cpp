#include "vipass/plant.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace vipass {

PlantParams PlantParams::Default(double dt) {
  PlantParams p;
  p.mass.diagonal() << 5.0, 5.0, 5.0, 0.2, 0.2, 0.2;
  p.damping.diagonal() << 5.0, 5.0, 5.0, 0.5, 0.5, 0.5;
  p.dt = dt;
  return p;
}

void PlantParams::validate() const {
  if (!(dt > 0.0)) throw ContractViolation("PlantParams: dt must be positive");
  if (!is_symmetric(mass, 1e-12)) throw ContractViolation("PlantParams: mass matrix not symmetric");
  if (!is_symmetric(damping, 1e-12)) throw ContractViolation("PlantParams: damping matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat6> em(mass, Eigen::EigenvaluesOnly);
  if (em.eigenvalues().minCoeff() <= 0.0) throw ContractViolation("PlantParams: mass matrix not positive definite");
  Eigen::SelfAdjointEigenSolver<Mat6> ed(damping, Eigen::EigenvaluesOnly);
  if (ed.eigenvalues().minCoeff() < -1e-12) throw ContractViolation("PlantParams: damping matrix not PSD");
  if (wall) {
    if (std::abs(wall->normal.norm() - 1.0) > 1e-9) throw ContractViolation("Wall: normal must be unit length");
    if (wall->stiffness < 0.0 || wall->damping < 0.0) throw ContractViolation("Wall: negative gains");
  }
}

Wrench wall_wrench(const PlantState& state, const Wall& wall) {
  const double penetration = wall.offset - wall.normal.dot(state.pose.position);
  if (penetration <= 0.0) return Wrench::Zero();
  const Vec3 world_velocity = state.pose.orientation.rotate(state.twist.linear());
  const double penetration_rate = -wall.normal.dot(world_velocity);
  const double magnitude = std::max(0.0, wall.stiffness * penetration + wall.damping * penetration_rate);
  const Vec3 force_world = magnitude * wall.normal;
  return Wrench(state.pose.orientation.inverse().rotate(force_world), Vec3::Zero());
}

namespace {

PlantState advance(const PlantState& state, const PlantParams& params, const Vec6& new_twist,
                   const Wrench& total_wrench) {
  auto fault = [&] {
    std::ostringstream msg;
    msg << "plant_step: non-finite state at t=" << state.time << " (|w|=" << total_wrench.value.norm() << ")";
    return PlantFault(msg.str());
  };
  if (!new_twist.allFinite()) throw fault();
  PlantState next;
  next.twist = Twist(new_twist);
  next.pose = exp_map(state.pose, TangentError(Vec6(next.twist.value * params.dt)));
  next.time = state.time + params.dt;
  if (!next.pose.position.allFinite()) throw fault();
  return next;
}

Vec6 applied_force(const PlantState& state, const PlantParams& params, const Wrench& total_wrench,
                   const Wrench& external_wrench) {
  Vec6 force = total_wrench.value + external_wrench.value - params.damping * state.twist.value;
  if (params.wall) force += wall_wrench(state, *params.wall).value;
  return force;
}

}  // namespace

PlantState plant_step(const PlantState& state, const PlantParams& params, const Wrench& total_wrench,
                      const Wrench& external_wrench) {
  const Vec6 force = applied_force(state, params, total_wrench, external_wrench);
  return advance(state, params, state.twist.value + params.mass.llt().solve(force) * params.dt, total_wrench);
}

PlantState plant_step(const PlantState& state, const PlantParams& params, const Wrench& total_wrench,
                      const Wrench& external_wrench, const Mat6& velocity_feedback) {
  if (velocity_feedback.isZero(0.0)) return plant_step(state, params, total_wrench, external_wrench);
  const Vec6 force = applied_force(state, params, total_wrench, external_wrench);
  const Mat6 lhs = params.mass + velocity_feedback * params.dt;
  const Vec6 rhs = params.mass * state.twist.value + force * params.dt;
  return advance(state, params, lhs.partialPivLu().solve(rhs), total_wrench);
}

double kinetic_energy(const Twist& twist, const Mat6& mass) {
  return 0.5 * twist.value.dot(mass * twist.value);
}

Vec6 filter_step(LowPassFilter& filter, const Vec6& input, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("filter_step: dt must be positive");
  if (filter.cutoff_hz <= 0.0) {
    filter.state = input;
    return input;
  }
  const double alpha = dt / (dt + 1.0 / (2.0 * M_PI * filter.cutoff_hz));
  filter.state += alpha * (input - filter.state);
  return filter.state;
}

}  // namespace vipass
