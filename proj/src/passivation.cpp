#include "vipass/passivation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace vipass {

namespace {

double quad(const Mat6& k, const Vec6& x) { return x.dot(k * x); }

}  // namespace

void AttractorState::validate() const {
  if (!(d >= 0.0 && d <= 1.0)) throw ContractViolation("AttractorState: d outside [0, 1]");
  if (!(d_curl >= 0.0 && d_curl <= 1.0)) throw ContractViolation("AttractorState: d_curl outside [0, 1]");
  if (!is_symmetric(K_passivated, 1e-9)) throw ContractViolation("AttractorState: K_passivated not symmetric");
  const double scale = std::max(1.0, K_passivated.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Mat6> es(symmetric_part(K_passivated), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * scale) {
    throw ContractViolation("AttractorState: K_passivated not positive semidefinite");
  }
}

double damping_power(const Twist& dv, const DampingMatrix& k_d, const Twist& dv_prev, DampingPowerMode mode) {
  if (mode == DampingPowerMode::Quadratic) return quad(k_d, dv.value);
  return std::max(0.0, dv.value.dot(k_d * dv_prev.value));
}

double deflection_limit_continuous(const AttractorState& state, const Mat6& k_dot, const TangentError& dx, double p_d,
                                   double epsilon) {
  const double num = p_d - 0.5 * state.d * state.d * quad(k_dot, dx.value);
  const double den = state.d * quad(state.K_nominal, dx.value) + epsilon;
  return num / den;
}

double deflection_continuous_update(const AttractorState& state, const StiffnessMatrix& k_next,
                                    const TangentError& dx, double p_d, double dt, double epsilon) {
  const double a_old = quad(state.K_nominal, dx.value);
  const double a_new = std::max(0.0, quad(k_next, dx.value));
  const double rhs = 0.5 * state.d * state.d * a_old + epsilon * state.d + std::max(0.0, p_d) * dt;
  // Solve 1/2 a_new d^2 + eps d = rhs for the non-negative root.
  double d_next;
  if (a_new > 0.0) {
    d_next = 2.0 * rhs / (epsilon + std::sqrt(epsilon * epsilon + 2.0 * a_new * rhs));
  } else {
    d_next = epsilon > 0.0 ? rhs / epsilon : 1.0;
  }
  return std::clamp(d_next, 0.0, 1.0);
}

double deflection_limit_step(const AttractorState& state, const StiffnessMatrix& k_next, const TangentError& dx,
                             double p_d, double dt, double epsilon) {
  const double num = p_d * dt + 0.5 * state.d * state.d * quad(state.K_nominal, dx.value);
  const double den = 0.5 * quad(k_next, dx.value) + epsilon;
  if (!(num > 0.0)) return 0.0;
  return std::min(1.0, std::sqrt(num / den));
}

Wrench deflection_passivated_wrench(const AttractorState& state, const TangentError& dx, const Twist& dv) {
  return Wrench(Vec6(state.d * state.d * (state.K_nominal * dx.value) + state.K_d * dv.value));
}

StiffnessLimitResult stiffness_limit_step_detailed(const AttractorState& state, const StiffnessMatrix& k_target,
                                                   const TangentError& dx, double p_d, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("stiffness_limit_step: dt must be positive");
  const Mat6 k_dot = (k_target - state.K_passivated) / dt;
  const double form = quad(k_dot, dx.value);
  StiffnessLimitResult res;
  if (0.5 * form <= 0.0) {
    res.K_next = k_target;
    res.d = 1.0;
    return res;
  }
  res.d = std::clamp(2.0 * p_d / form, 0.0, 1.0);
  res.K_next = res.d * k_target + (1.0 - res.d) * state.K_passivated;
  return res;
}

StiffnessMatrix stiffness_limit_step(const AttractorState& state, const StiffnessMatrix& k_target,
                                     const TangentError& dx, double p_d, double dt) {
  return stiffness_limit_step_detailed(state, k_target, dx, p_d, dt).K_next;
}

Wrench stiffness_passivated_wrench(const AttractorState& state, const TangentError& dx, const Twist& dv) {
  return Wrench(Vec6(state.K_passivated * dx.value + state.K_d * dv.value));
}

CurlResult curl_passivation(const Mat6& k_curl, const TangentError& dx, const Twist& dv, double p_d, double p_a,
                            double allowance) {
  if (!(allowance >= 0.0)) throw ContractViolation("curl_passivation: allowance must be non-negative");
  const Vec6 w = k_curl * dx.value;
  const double p_curl = -dv.value.dot(w);
  CurlResult res;
  if (p_curl <= allowance || p_curl <= 0.0) {
    res.d_curl = 1.0;
  } else if (p_d <= p_a) {
    res.d_curl = 0.0;
  } else {
    res.d_curl = std::min((p_d - p_a) / p_curl, 1.0);
  }
  res.wrench = Wrench(Vec6(res.d_curl * w));
  return res;
}

double draw_initial_energy(InitialEnergyBudget& budget, double requested, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("draw_initial_energy: dt must be positive");
  if (!(requested >= 0.0)) throw ContractViolation("draw_initial_energy: requested must be non-negative");
  const double granted = std::max(0.0, std::min({requested, budget.rate_limit, budget.remaining / dt}));
  budget.remaining = std::max(0.0, budget.remaining - granted * dt);
  return granted;
}

double deflection_active_power(double d, const StiffnessMatrix& k, double d_next, const StiffnessMatrix& k_next,
                               const TangentError& dx, double dt) {
  const double e_next = 0.5 * d_next * d_next * quad(k_next, dx.value);
  const double e_prev = 0.5 * d * d * quad(k, dx.value);
  return std::max(0.0, (e_next - e_prev) / dt);
}

double stiffness_active_power(const StiffnessMatrix& k_prev, const StiffnessMatrix& k_next, const TangentError& dx,
                              double dt) {
  return std::max(0.0, 0.5 * quad(k_next - k_prev, dx.value) / dt);
}

}  // namespace vipass
