#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vipass/scenario.hpp"

namespace vipass {

/// Names of the built-in scenarios, in a stable order.
std::vector<std::string> catalogue_names();

/// One-line description of a built-in scenario.
std::string catalogue_description(std::string_view name);

/// Builds a built-in scenario. Throws ContractViolation for unknown names.
Scenario catalogue_scenario(std::string_view name);

struct RandomScenarioOptions {
  double duration = 2.0;
  double dt = 1e-3;
  PassivationMethod method = PassivationMethod::DeflectionDiscrete;
};

/// Seeded random scenario: one or two static attractors with random PSD
/// stiffness schedules (jumps and ramps, translational eigenvalues up to
/// 3000 N/m, rotational up to 100 N m/rad) and bounded random external
/// wrenches (50 N, 5 N m). Every scenario contains an upward stiffness jump
/// while the spring is deflected.
Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

}  // namespace vipass
