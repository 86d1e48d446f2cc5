#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vipass/impedance.hpp"
#include "vipass/passivation.hpp"
#include "vipass/plant.hpp"
#include "vipass/schedule.hpp"
#include "vipass/tank.hpp"

namespace vipass {

enum class PassivationMethod { None, DeflectionContinuous, DeflectionDiscrete, StiffnessChange, TankBaseline };
enum class ArbitrationKind { None, Fixed, GaussianProduct };

/// Which stiffness the damping design sees. Passivated: K* for the
/// deflection limiter (the scaling acts as a lossless lever in front of the
/// spring) and the previous K+ for the stiffness-change limiter. Nominal:
/// always K*.
enum class DampingSource { Passivated, Nominal };

std::string_view to_string(PassivationMethod m);
std::string_view to_string(ArbitrationKind k);
/// Throws ContractViolation on an unknown name.
PassivationMethod parse_method(std::string_view name);
ArbitrationKind parse_arbitration(std::string_view name);

struct AttractorConfig {
  IdSchedule ids;  // empty: constant id equal to the attractor index
  PoseSchedule pose;
  MatrixSchedule stiffness = MatrixSchedule::Constant(Mat6::Zero());
  ManifoldChart chart;
  bool initially_active = false;
  MatrixSchedule scaling = MatrixSchedule::Constant(Mat6::Identity());     // fixed arbitration
  MatrixSchedule covariance = MatrixSchedule::Constant(Mat6::Identity());  // gaussian product
};

struct DampingConfig {
  double xi = 0.7;
  double min_eigenvalue = 0.1;
  DampingSource source = DampingSource::Passivated;
  DampingPowerMode power_mode = DampingPowerMode::Quadratic;
};

struct Scenario {
  std::string name;
  double duration = 1.0;  // s
  double dt = 1e-3;       // s
  PlantParams plant = PlantParams::Default();
  Pose initial_pose;
  Twist initial_twist;
  double ee_velocity_cutoff_hz = 0.0;         // 0 disables the filter
  double attractor_velocity_cutoff_hz = 10.0;  // 0 disables the filter
  std::vector<AttractorConfig> attractors;
  ArbitrationKind arbitration = ArbitrationKind::None;
  PassivationMethod method = PassivationMethod::DeflectionDiscrete;
  DampingConfig damping;
  double epsilon = kMachineEpsilon;
  double curl_allowance = kDefaultCurlAllowance;
  InitialEnergyBudget initial_energy;
  EnergyTank tank;
  /// Applies the arbitration scaling to the damping wrench as well as the
  /// spring. Off by default: only the stiffness path is modulated.
  bool scale_damping_wrench = false;
  WrenchProfile external_wrench;  // world axes

  std::size_t steps() const;
  /// Throws ContractViolation on inconsistent settings.
  void validate() const;
};

/// Parses the JSON scenario format documented in the README.
Scenario parse_scenario_json(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);
/// Serializes to the same format; parse_scenario_json inverts it.
std::string scenario_to_json(const Scenario& s);

}  // namespace vipass
