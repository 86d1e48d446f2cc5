#include "vipass/catalogue.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace vipass {

namespace {

Mat6 diag6(double a, double b, double c, double d, double e, double f) {
  Vec6 v;
  v << a, b, c, d, e, f;
  return v.asDiagonal();
}

Pose at(double x, double y, double z, const Vec3& rotvec = Vec3::Zero()) {
  return {Vec3(x, y, z), UnitQuaternion::from_rotation_vector(rotvec)};
}

WrenchSegment force(const Vec6& w, double start = -INFINITY, double end = INFINITY) {
  WrenchSegment s;
  s.value = w;
  s.t_start = start;
  s.t_end = end;
  return s;
}

Vec6 v6(double a, double b, double c, double d = 0, double e = 0, double f = 0) {
  Vec6 v;
  v << a, b, c, d, e, f;
  return v;
}

// One translational axis only: a stiffness step under a push that keeps the
// spring deflected and the robot moving, integrated with the continuous law.
Scenario fig4_step_continuous() {
  Scenario s;
  s.name = "fig4_step_continuous";
  s.duration = 3.0;
  s.dt = 1.0 / 8000.0;
  s.plant.mass = diag6(1, 1, 1, 0.1, 0.1, 0.1);
  s.plant.damping = Mat6::Identity();
  s.method = PassivationMethod::DeflectionContinuous;

  AttractorConfig a;
  a.pose = PoseSchedule::Constant(Pose::Identity());
  a.stiffness.interpolation = Interpolation::Step;
  a.stiffness.keys = {{0.0, diag6(500, 0, 0, 0, 0, 0)}, {1.0, diag6(1000, 0, 0, 0, 0, 0)}};
  a.initially_active = true;
  s.attractors.push_back(a);
  s.external_wrench.segments.push_back(force(v6(10, 0, 0)));
  WrenchSegment wave;
  wave.kind = WrenchSegment::Kind::Sinusoid;
  wave.value = v6(5, 0, 0);
  wave.frequency_hz = 2.0;
  s.external_wrench.segments.push_back(wave);
  return s;
}

// Springs start switched off with the attractor away from the robot; a
// push at 0.5 s provides the damping power that lets them engage.
Scenario init_scenario(const char* name, PassivationMethod method) {
  Scenario s;
  s.name = name;
  s.duration = 3.0;
  s.method = method;
  AttractorConfig a;
  a.pose = PoseSchedule::Constant(at(0.05, 0.02, 0.0, Vec3(0.0, 0.0, 0.1)));
  a.stiffness = MatrixSchedule::Constant(diag6(1000, 1000, 1000, 50, 50, 50));
  a.initially_active = false;
  s.attractors.push_back(a);
  s.external_wrench.segments.push_back(force(v6(10, 0, 0), 0.5));
  return s;
}

// Energy tank: a stiffness switch-on paid from the tank, then a sustained
// push with a square-wave x stiffness whose upward jumps drain it.
Scenario baseline_tank() {
  Scenario s;
  s.name = "baseline_tank";
  s.duration = 7.0;
  s.method = PassivationMethod::TankBaseline;
  s.tank = EnergyTank{1.0, 1.0, 0.01};
  const Mat6 k_nominal = diag6(1000, 1000, 1000, 50, 50, 50);
  const Mat6 k_high = diag6(3000, 1000, 1000, 50, 50, 50);
  AttractorConfig a;
  a.pose = PoseSchedule::Constant(at(0.0316, 0, 0));
  a.stiffness.interpolation = Interpolation::Step;
  a.stiffness.keys = {{0.0, Mat6::Zero()}, {0.5, k_nominal}};
  for (int k = 0; k < 8; ++k) {
    const double t0 = 5.0 + 0.25 * k;
    a.stiffness.keys.push_back({t0, k_high});
    a.stiffness.keys.push_back({t0 + 0.125, k_nominal});
  }
  a.initially_active = false;
  s.attractors.push_back(a);
  s.external_wrench.segments.push_back(force(v6(-30, 0, 0), 5.0));
  return s;
}

// Approach and press into a wall, then a stiffness jump while in static
// contact; motion is started from rest with a small initial energy.
Scenario impact_initial_energy() {
  Scenario s;
  s.name = "impact_initial_energy";
  s.duration = 10.0;
  s.dt = 1.0 / 8000.0;
  s.method = PassivationMethod::StiffnessChange;
  s.plant.wall = Wall{Vec3::UnitZ(), -0.1, 1e5, 200.0};
  s.initial_energy = {0.2, 0.3};
  AttractorConfig a;
  a.pose.interpolation = Interpolation::Linear;
  const Vec3 rot(0.2, 0.0, 0.0);
  a.pose.keys = {{0.0, at(0.05, 0, 0, rot)}, {1.5, at(0.05, 0, 0, rot)}, {6.5, at(0.05, 0, -0.15, rot)},
                 {9.0, at(0.05, 0, -0.15, rot)}, {9.5, at(0.05, 0, 0, rot)}};
  a.stiffness.interpolation = Interpolation::Step;
  a.stiffness.keys = {{0.0, diag6(500, 500, 500, 20, 20, 20)}, {7.0, diag6(500, 500, 2000, 20, 20, 20)}};
  a.initially_active = false;
  s.attractors.push_back(a);
  return s;
}

// Sinusoidal x stiffness with constant y/z stiffness under a constant push;
// the attractor first travels 20 cm along y.
Scenario sinusoid_scenario(const char* name, PassivationMethod method) {
  Scenario s;
  s.name = name;
  s.duration = 20.0;
  s.method = method;
  AttractorConfig a;
  a.pose.interpolation = Interpolation::Linear;
  a.pose.keys = {{0.0, at(0, 0, 0)}, {0.5, at(0, 0, 0)}, {2.5, at(0, 0.2, 0)}};
  a.stiffness = MatrixSchedule::Constant(diag6(700, 2000, 2000, 50, 50, 50));
  a.stiffness.sinusoid = MatrixSchedule::DiagonalSinusoid{v6(500, 0, 0), 1.0, 0.0};
  a.initially_active = true;
  s.attractors.push_back(a);
  s.external_wrench.segments.push_back(force(v6(10, 0, -30)));
  return s;
}

// Two straight-line trajectories whose authority is shared by a Gaussian
// product; the second one's covariance shrinks so it takes over.
Scenario arbitration_two_trajectories() {
  Scenario s;
  s.name = "arbitration_two_trajectories";
  s.duration = 5.0;
  s.method = PassivationMethod::DeflectionDiscrete;
  s.arbitration = ArbitrationKind::GaussianProduct;
  const Mat6 k = diag6(800, 800, 800, 30, 30, 30);
  for (int i = 0; i < 2; ++i) {
    AttractorConfig a;
    const double y = i == 0 ? -0.04 : 0.04;
    for (int v = 0; v <= 400; ++v) a.pose.polyline.push_back(at(-0.1 + 0.001 * v, y, 0.0));
    a.stiffness = MatrixSchedule::Constant(k);
    a.initially_active = true;
    a.covariance.interpolation = Interpolation::Linear;
    if (i == 0) {
      a.covariance.keys = {{0.0, Mat6::Identity()}};
    } else {
      a.covariance.keys = {{0.0, 4.0 * Mat6::Identity()}, {1.5, 4.0 * Mat6::Identity()},
                           {3.5, 0.25 * Mat6::Identity()}};
    }
    s.attractors.push_back(a);
  }
  WrenchSegment drive;
  drive.kind = WrenchSegment::Kind::Sinusoid;
  drive.value = v6(15, 0, 0);
  drive.frequency_hz = 0.4;
  s.external_wrench.segments.push_back(drive);
  return s;
}

// Fixed non-symmetric scalings: the modulated stiffnesses have a skew part
// whose power is limited by the curl passivation.
Scenario asymmetric_two_attractors() {
  Scenario s;
  s.name = "asymmetric_two_attractors";
  s.duration = 4.0;
  s.method = PassivationMethod::DeflectionDiscrete;
  s.arbitration = ArbitrationKind::Fixed;
  Mat6 s1 = 0.5 * Mat6::Identity();
  s1(0, 1) = 0.3;
  s1(1, 0) = -0.3;
  const Mat6 s2 = Mat6::Identity() - s1;
  const Mat6 k = diag6(1000, 1000, 1000, 40, 40, 40);
  const Pose targets[2] = {at(0.04, 0.0, 0.0), at(-0.02, 0.05, 0.0)};
  const Mat6 scalings[2] = {s1, s2};
  for (int i = 0; i < 2; ++i) {
    AttractorConfig a;
    a.pose = PoseSchedule::Constant(targets[i]);
    a.stiffness = MatrixSchedule::Constant(k);
    a.scaling = MatrixSchedule::Constant(scalings[i]);
    a.initially_active = true;
    s.attractors.push_back(a);
  }
  WrenchSegment push;
  push.kind = WrenchSegment::Kind::Sinusoid;
  push.value = v6(10, 10, 0);
  push.frequency_hz = 0.5;
  s.external_wrench.segments.push_back(push);
  return s;
}

struct Entry {
  const char* description;
  std::function<Scenario()> build;
};

const std::map<std::string, Entry, std::less<>>& registry() {
  static const std::map<std::string, Entry, std::less<>> r = {
      {"fig4_step_continuous", {"1-DOF stiffness step at 1 s, continuous deflection limiter, 8 kHz", fig4_step_continuous}},
      {"fig5_init_deflection",
       {"springs start at zero, 10 N push at 0.5 s, deflection limiter",
        [] { return init_scenario("fig5_init_deflection", PassivationMethod::DeflectionDiscrete); }}},
      {"fig6_init_kdot",
       {"springs start at zero, 10 N push at 0.5 s, stiffness-change limiter",
        [] { return init_scenario("fig6_init_kdot", PassivationMethod::StiffnessChange); }}},
      {"baseline_tank", {"energy-tank baseline: switch-on at 0.5 s, draining push and stiffness jumps from 5 s", baseline_tank}},
      {"impact_initial_energy",
       {"wall contact, stiffness jump at 7 s, 0.2 J initial energy at 0.3 W, 8 kHz", impact_initial_energy}},
      {"fig9_sinusoid_deflection",
       {"K_x = 700 + 500 sin t under (10, 0, -30) N, deflection limiter",
        [] { return sinusoid_scenario("fig9_sinusoid_deflection", PassivationMethod::DeflectionDiscrete); }}},
      {"fig10_sinusoid_kdot",
       {"K_x = 700 + 500 sin t under (10, 0, -30) N, stiffness-change limiter",
        [] { return sinusoid_scenario("fig10_sinusoid_kdot", PassivationMethod::StiffnessChange); }}},
      {"arbitration_two_trajectories",
       {"two polyline trajectories fused by a Gaussian product", arbitration_two_trajectories}},
      {"asymmetric_two_attractors",
       {"fixed non-symmetric scalings producing curl stiffness", asymmetric_two_attractors}},
  };
  return r;
}

}  // namespace

std::vector<std::string> catalogue_names() {
  return {"fig4_step_continuous", "fig5_init_deflection", "fig6_init_kdot",
          "baseline_tank", "impact_initial_energy", "fig9_sinusoid_deflection",
          "fig10_sinusoid_kdot", "arbitration_two_trajectories", "asymmetric_two_attractors"};
}

std::string catalogue_description(std::string_view name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ContractViolation("unknown catalogue scenario '" + std::string(name) + "'");
  return it->second.description;
}

Scenario catalogue_scenario(std::string_view name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ContractViolation("unknown catalogue scenario '" + std::string(name) + "'");
  Scenario s = it->second.build();
  s.plant.dt = s.dt;
  s.validate();
  return s;
}

}  // namespace vipass
