#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vipass/scenario.hpp"
#include "vipass/trace.hpp"

namespace vipass {

/// The plant state became non-finite. Carries the step index and the last
/// trace row written before the fault.
class SimulationAborted : public std::runtime_error {
 public:
  SimulationAborted(const std::string& what, std::size_t step, std::vector<double> row)
      : std::runtime_error(what), step_(step), row_(std::move(row)) {}
  std::size_t step() const { return step_; }
  const std::vector<double>& row() const { return row_; }

 private:
  std::size_t step_;
  std::vector<double> row_;
};

/// Runs a scenario for duration/dt steps and returns rows for ticks
/// 0..N. Deterministic for a given scenario.
///
/// Per tick and attractor: measure the deflection dx in the attractor's
/// chart and its rate dv = A v_ee + b, where A is the deflection Jacobian
/// and b the low-passed change of dx caused by attractor motion. Modulate
/// the stiffness by the arbitration, split it into a PSD symmetric part and
/// a skew part, design damping, passivate, scale the curl term, then step
/// the plant. All chart wrenches reach the end effector through T = -A^T.
/// The damping term acts on the deflection rate over the coming step and is
/// integrated implicitly by the plant.
///
/// Energy ledger. Row n holds V = kinetic energy + sum of spring energies
/// 1/2 dx^T K dx with the stiffness chosen at tick n. Supplied energy
/// accumulates, over each step, the work of the external and wall wrenches
/// and of every controller wrench against the new end-effector velocity,
/// the work of each controller wrench against its attractor's motion
/// (the change of dx not explained by the end effector), and initial-energy
/// grants. The damping power that funds a stiffness change at tick n is
/// evaluated with the damping that acted over the step ending there.
/// Vdot and Vdot_inp are backward differences; row 0 holds zeros.
TraceTable run_scenario(const Scenario& scenario);

/// Largest value of (V_total(t) - V_total(0)) - V_inp(t) over the trace.
double ledger_excess(const TraceTable& trace);

}  // namespace vipass
