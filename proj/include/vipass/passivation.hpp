#pragma once

#include <limits>

#include "vipass/impedance.hpp"

namespace vipass {

/// Per-attractor controller state carried across control steps.
struct AttractorState {
  int id = 0;
  Pose pose;
  Pose prev_pose;
  Twist twist;  // low-passed rate of the deflection caused by attractor motion
  ManifoldChart chart;
  StiffnessMatrix K_nominal = Mat6::Zero();     // symmetric part after arbitration
  Mat6 K_curl = Mat6::Zero();                   // skew part after arbitration
  StiffnessMatrix K_passivated = Mat6::Zero();  // stiffness-change limiter state
  DampingMatrix K_d = Mat6::Zero();
  double d = 0.0;       // deflection scaling
  double d_curl = 1.0;  // curl scaling

  /// Throws ContractViolation when d or d_curl leave [0, 1] or K_passivated
  /// is not symmetric PSD (tolerance 1e-9, relative to its magnitude).
  void validate() const;
};

struct InitialEnergyBudget {
  double remaining = 0.0;   // J
  double rate_limit = 0.0;  // W
};

enum class DampingPowerMode { Quadratic, Lagged };

inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();

/// Power dissipated by the damper. Quadratic: dv^T K_d dv. Lagged:
/// dv^T K_d dv_prev, clamped at zero.
double damping_power(const Twist& dv, const DampingMatrix& k_d, const Twist& dv_prev, DampingPowerMode mode);

/// d_dot = (P_d - 1/2 d^2 dx^T K_dot dx) / (d dx^T K* dx + eps), using
/// state.d and state.K_nominal.
double deflection_limit_continuous(const AttractorState& state, const Mat6& k_dot, const TangentError& dx, double p_d,
                                   double epsilon = kMachineEpsilon);

/// Integrates the continuous law over one step with dx held fixed and the
/// stiffness moving from state.K_nominal to k_next. Along that flow
/// 1/2 d^2 dx^T K dx + eps d grows by exactly P_d dt, so the new scaling is
/// the root of a quadratic. Result clamped to [0, 1].
double deflection_continuous_update(const AttractorState& state, const StiffnessMatrix& k_next,
                                    const TangentError& dx, double p_d, double dt, double epsilon = kMachineEpsilon);

/// Discrete deflection limiter:
/// d_next = min(1, sqrt((P_d dt + 1/2 d^2 dx^T K dx) / (1/2 dx^T K_next dx + eps)))
/// with K = state.K_nominal and d = state.d.
double deflection_limit_step(const AttractorState& state, const StiffnessMatrix& k_next, const TangentError& dx,
                             double p_d, double dt, double epsilon = kMachineEpsilon);

/// Spring term d^2 K* dx plus unscaled damping K_d dv.
Wrench deflection_passivated_wrench(const AttractorState& state, const TangentError& dx, const Twist& dv);

struct StiffnessLimitResult {
  StiffnessMatrix K_next = Mat6::Zero();
  double d = 1.0;
};

/// Stiffness-change limiter. With K_dot = (K_target - K+)/dt and
/// P_a = 1/2 dx^T K_dot dx: if P_a <= 0 the target passes through, otherwise
/// d = min(1, 2 P_d / dx^T K_dot dx) and K_next = d K_target + (1 - d) K+.
StiffnessLimitResult stiffness_limit_step_detailed(const AttractorState& state, const StiffnessMatrix& k_target,
                                                   const TangentError& dx, double p_d, double dt);

StiffnessMatrix stiffness_limit_step(const AttractorState& state, const StiffnessMatrix& k_target,
                                     const TangentError& dx, double p_d, double dt);

/// Spring term K+ dx plus damping K_d dv.
Wrench stiffness_passivated_wrench(const AttractorState& state, const TangentError& dx, const Twist& dv);

struct CurlResult {
  double d_curl = 1.0;
  Wrench wrench;
};

inline constexpr double kDefaultCurlAllowance = 0.1;  // W

/// Scales the skew stiffness so that its active power stays inside the
/// damping budget left after the symmetric part (P_d - P_a).
CurlResult curl_passivation(const Mat6& k_curl, const TangentError& dx, const Twist& dv, double p_d, double p_a,
                            double allowance = kDefaultCurlAllowance);

/// Grants min(requested, rate_limit, remaining/dt) and debits the budget.
double draw_initial_energy(InitialEnergyBudget& budget, double requested, double dt);

/// Realized spring-energy rate of a deflection update, clamped at zero:
/// (1/2 d_next^2 dx^T K_next dx - 1/2 d^2 dx^T K dx) / dt.
double deflection_active_power(double d, const StiffnessMatrix& k, double d_next, const StiffnessMatrix& k_next,
                               const TangentError& dx, double dt);

/// Realized spring-energy rate of a stiffness update, clamped at zero.
double stiffness_active_power(const StiffnessMatrix& k_prev, const StiffnessMatrix& k_next, const TangentError& dx,
                              double dt);

}  // namespace vipass
