#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vipass/plant.hpp"

using namespace vipass;

namespace {

PlantParams unit_params(double dt, double damping = 0.0) {
  PlantParams p;
  p.mass = Mat6::Identity();
  p.damping = damping * Mat6::Identity();
  p.dt = dt;
  return p;
}

Wrench force_x(double f) { return Wrench(Vec3(f, 0, 0), Vec3::Zero()); }

}  // namespace

TEST(PlantParams, DefaultIsValid) { EXPECT_NO_THROW(PlantParams::Default().validate()); }

TEST(PlantParams, RejectsBadMatrices) {
  PlantParams p = PlantParams::Default();
  p.mass(0, 0) = -1.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = PlantParams::Default();
  p.damping(0, 1) = 1.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = PlantParams::Default();
  p.dt = 0.0;
  EXPECT_THROW(p.validate(), ContractViolation);
}

TEST(PlantStep, AtRestWithoutWrenchOnlyTimeAdvances) {
  const PlantState s{Pose{Vec3(0.1, 0.2, 0.3), UnitQuaternion::from_rotation_vector(Vec3(0.1, 0, 0))}, Twist(), 2.0};
  const PlantState n = plant_step(s, PlantParams::Default(), Wrench(), Wrench());
  EXPECT_EQ(n.pose.position, s.pose.position);
  EXPECT_TRUE(n.pose.orientation.same_rotation(s.pose.orientation, 0.0));
  EXPECT_EQ(n.twist.value, Vec6::Zero());
  EXPECT_DOUBLE_EQ(n.time, 2.001);
}

TEST(PlantStep, ConstantForceMatchesClosedForm) {
  const PlantParams p = unit_params(1e-3);
  PlantState s;
  for (int i = 0; i < 1000; ++i) s = plant_step(s, p, Wrench(), force_x(10.0));
  EXPECT_NEAR(s.twist.value(0), 10.0, 1e-6);
  // Semi-implicit Euler position: sum of k dt^2 F for k = 1..N.
  EXPECT_NEAR(s.pose.position.x(), 10.0 * 1e-6 * 1000 * 1001 / 2, 1e-9);
}

TEST(PlantStep, ViscousTerminalVelocity) {
  const PlantParams p = unit_params(1e-3, 10.0);
  PlantState s;
  for (int i = 0; i < 5000; ++i) s = plant_step(s, p, Wrench(), force_x(10.0));
  EXPECT_NEAR(s.twist.value(0), 1.0, 0.01);
}

TEST(PlantStep, ControllerAndExternalWrenchesAdd) {
  const PlantParams p = unit_params(1e-3);
  const PlantState a = plant_step(PlantState{}, p, force_x(3.0), force_x(4.0));
  const PlantState b = plant_step(PlantState{}, p, Wrench(), force_x(7.0));
  EXPECT_EQ(a.twist.value, b.twist.value);
}

TEST(PlantStep, AngularVelocityRotatesInBodyFrame) {
  const PlantParams p = unit_params(1e-3);
  PlantState s;
  s.twist = Twist(Vec3::Zero(), Vec3(0, 0, 1.0));
  for (int i = 0; i < 1000; ++i) s = plant_step(s, p, Wrench(), Wrench());
  EXPECT_NEAR(s.pose.orientation.rotation_vector().z(), 1.0, 1e-9);
  EXPECT_NEAR(s.pose.orientation.eigen().norm(),
              1.0, 1e-12);
}

TEST(PlantStep, NonFiniteResultFaults) {
  EXPECT_THROW(plant_step(PlantState{}, unit_params(1e-3), force_x(INFINITY), Wrench()), PlantFault);
}

TEST(PlantStep, IsBitwiseDeterministic) {
  const PlantParams p = PlantParams::Default();
  PlantState a, b;
  const Wrench w(Vec3(1, -2, 3), Vec3(0.1, 0.2, -0.3));
  for (int i = 0; i < 500; ++i) {
    a = plant_step(a, p, w, Wrench());
    b = plant_step(b, p, w, Wrench());
  }
  EXPECT_EQ(a.twist.value, b.twist.value);
  EXPECT_EQ(a.pose.position, b.pose.position);
}

TEST(PlantStep, PassiveWithoutInputs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PlantParams p = PlantParams::Default();
  PlantState s;
  for (int k = 0; k < 6; ++k) s.twist.value(k) = u(rng);
  double e = kinetic_energy(s.twist, p.mass);
  for (int i = 0; i < 2000; ++i) {
    s = plant_step(s, p, Wrench(), Wrench());
    const double e_next = kinetic_energy(s.twist, p.mass);
    EXPECT_LE(e_next, e);
    e = e_next;
  }
}

TEST(PlantStep, VelocityFeedbackMatchesImplicitSolution) {
  const PlantParams p = unit_params(1e-3);
  const Mat6 b = 50.0 * Mat6::Identity();
  PlantState s;
  s.twist.value(0) = 1.0;
  const PlantState n = plant_step(s, p, Wrench(), force_x(2.0), b);
  // (1 + 50 dt) v' = 1 + 2 dt
  EXPECT_NEAR(n.twist.value(0), (1.0 + 2e-3) / (1.0 + 50e-3), 1e-14);
}

TEST(PlantStep, ZeroFeedbackIsTheExplicitStep) {
  const PlantParams p = PlantParams::Default();
  PlantState s;
  s.twist = Twist(Vec3(0.1, 0.2, 0.3), Vec3(-0.1, 0.4, 0.2));
  const Wrench w(Vec3(1, 2, 3), Vec3(0.3, 0.2, 0.1));
  const PlantState a = plant_step(s, p, w, Wrench());
  const PlantState b = plant_step(s, p, w, Wrench(), Mat6::Zero());
  EXPECT_EQ(a.twist.value, b.twist.value);
}

TEST(PlantStep, HalvingStepConvergesLinearly) {
  auto run = [](double dt) {
    PlantParams p = PlantParams::Default(dt);
    PlantState s;
    const auto n = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < n; ++i) {
      const double f = 10.0 * std::sin(2 * M_PI * s.time);
      s = plant_step(s, p, Wrench(Vec3(f, 0, 0), Vec3(0, 0, 0.5 * f)), Wrench());
    }
    return s.pose.position.x();
  };
  const double e1 = std::abs(run(1e-3) - run(1.25e-4));
  const double e2 = std::abs(run(5e-4) - run(1.25e-4));
  EXPECT_LT(e2, 0.75 * e1);
}

TEST(WallWrench, ZeroOutsideWall) {
  const Wall w{Vec3::UnitZ(), 0.0, 1e5, 0.0};
  PlantState s;
  s.pose.position = Vec3(0, 0, 0.01);
  EXPECT_EQ(wall_wrench(s, w).value, Vec6::Zero());
}

TEST(WallWrench, PenaltyForce) {
  const Wall w{Vec3::UnitZ(), 0.0, 1e5, 0.0};
  PlantState s;
  s.pose.position = Vec3(0, 0, -0.001);
  const Wrench f = wall_wrench(s, w);
  EXPECT_NEAR(f.value(2), 100.0, 1e-9);
  EXPECT_NEAR(f.value.tail<3>().norm(), 0.0, 1e-15);
}

TEST(WallWrench, ForceIsExpressedInBodyFrame) {
  const Wall w{Vec3::UnitZ(), 0.0, 1e5, 0.0};
  PlantState s;
  s.pose.position = Vec3(0, 0, -0.001);
  s.pose.orientation = UnitQuaternion::from_rotation_vector(Vec3(M_PI / 2, 0, 0));
  // A quarter turn about x carries body +y onto world +z.
  EXPECT_NEAR(wall_wrench(s, w).value(1), 100.0, 1e-9);
  EXPECT_NEAR(wall_wrench(s, w).value(2), 0.0, 1e-9);
}

TEST(WallWrench, RetractingFastIsClampedToZero) {
  const Wall w{Vec3::UnitZ(), 0.0, 1e5, 1000.0};
  PlantState s;
  s.pose.position = Vec3(0, 0, -0.001);
  s.twist = Twist(Vec3(0, 0, 1.0), Vec3::Zero());
  EXPECT_EQ(wall_wrench(s, w).value, Vec6::Zero());
}

TEST(LowPass, DisabledPassesThrough) {
  LowPassFilter f;
  Vec6 u = Vec6::Constant(3.0);
  EXPECT_EQ(filter_step(f, u, 1e-3), u);
}

TEST(LowPass, ZeroStaysZero) {
  LowPassFilter f{100.0, Vec6::Zero()};
  for (int i = 0; i < 10; ++i) EXPECT_EQ(filter_step(f, Vec6::Zero(), 1e-3), Vec6::Zero());
}

TEST(LowPass, UnitDcGain) {
  LowPassFilter f{10.0, Vec6::Zero()};
  Vec6 y;
  for (int i = 0; i < 5000; ++i) y = filter_step(f, Vec6::Constant(2.0), 1e-3);
  EXPECT_NEAR(y(0), 2.0, 2e-3);
}

TEST(LowPass, TimeConstantAtHundredHertz) {
  // Fine step so that the discrete crossing time resolves tau to well
  // under a percent.
  const double dt = 1e-6;
  const double tau = 1.0 / (2 * M_PI * 100.0);
  LowPassFilter f{100.0, Vec6::Zero()};
  double t = 0.0;
  double y = 0.0;
  while (y < 1.0 - std::exp(-1.0)) {
    y = filter_step(f, Vec6::Ones(), dt)(0);
    t += dt;
  }
  EXPECT_NEAR(t, tau, 0.05 * tau);
}

TEST(LowPass, RejectsNonPositiveStep) {
  LowPassFilter f{10.0, Vec6::Zero()};
  EXPECT_THROW(filter_step(f, Vec6::Zero(), 0.0), ContractViolation);
}
