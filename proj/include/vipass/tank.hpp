#pragma once

namespace vipass {

/// Energy tank baseline. Stiffness changes are paid from energy previously
/// dissipated by the damper. Below the floor the variable-stiffness action
/// is switched off entirely.
struct EnergyTank {
  double level = 1.0;     // J
  double capacity = 1.0;  // J
  double floor = 0.01;    // J

  /// Throws ContractViolation unless 0 <= level <= capacity and floor >= 0.
  void validate() const;
};

struct TankStepResult {
  bool enabled = false;
  EnergyTank tank;
};

/// enabled = level > floor; level' = clamp(level + P_d dt - (enabled ? P_required dt : 0), 0, capacity).
TankStepResult tank_step(const EnergyTank& tank, double p_d, double p_required, double dt);

}  // namespace vipass
