#include "vipass/tank.hpp"

#include <algorithm>

#include "vipass/types.hpp"

namespace vipass {

void EnergyTank::validate() const {
  if (!(capacity >= 0.0)) throw ContractViolation("EnergyTank: capacity must be non-negative");
  if (!(level >= 0.0 && level <= capacity)) throw ContractViolation("EnergyTank: level outside [0, capacity]");
  if (!(floor >= 0.0)) throw ContractViolation("EnergyTank: floor must be non-negative");
}

TankStepResult tank_step(const EnergyTank& tank, double p_d, double p_required, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("tank_step: dt must be positive");
  TankStepResult res;
  res.enabled = tank.level > tank.floor;
  res.tank = tank;
  const double cost = res.enabled ? std::max(0.0, p_required) * dt : 0.0;
  res.tank.level = std::clamp(tank.level + std::max(0.0, p_d) * dt - cost, 0.0, tank.capacity);
  return res;
}

}  // namespace vipass
