#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "vipass/catalogue.hpp"
#include "vipass/harness.hpp"

using namespace vipass;

namespace {

// Ledger closure tolerance C dt t; the discrete ledger closes to rounding,
// so C only has to absorb accumulated floating-point error.
constexpr double kClosureConstant = 1.0;  // W/s

std::string csv(const TraceTable& t) {
  std::ostringstream out;
  write_trace(t, out);
  return out.str();
}

Scenario single_attractor(double stiffness, PassivationMethod method) {
  Scenario s;
  s.name = "single";
  s.duration = 0.5;
  s.method = method;
  AttractorConfig a;
  a.pose = PoseSchedule::Constant(Pose::Identity());
  a.stiffness = MatrixSchedule::Constant(stiffness * Mat6::Identity());
  s.attractors.push_back(a);
  return s;
}

}  // namespace

TEST(RunScenario, RowCountAndHeader) {
  const Scenario s = single_attractor(0.0, PassivationMethod::DeflectionDiscrete);
  const TraceTable t = run_scenario(s);
  EXPECT_EQ(t.rows.size(), s.steps() + 1);
  EXPECT_EQ(t.columns, trace_columns(1));
  for (const auto& r : t.rows) ASSERT_EQ(r.size(), t.columns.size());
  EXPECT_NEAR(t.rows.back()[0], 0.5, 1e-12);
}

TEST(RunScenario, ZeroStiffnessZeroWrenchStaysAtRest) {
  const TraceTable t = run_scenario(single_attractor(0.0, PassivationMethod::DeflectionDiscrete));
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const auto& name = t.columns[c];
    if (name == "time_s" || name == "qw" || name == "a0_d" || name == "a0_d_curl") continue;
    for (const auto& r : t.rows) ASSERT_EQ(r[c], 0.0) << name;
  }
  for (double qw : t.column("qw")) ASSERT_EQ(qw, 1.0);
}

TEST(RunScenario, CsvIsByteIdenticalAcrossRuns) {
  for (const char* name : {"fig4_step_continuous", "asymmetric_two_attractors"}) {
    Scenario s = catalogue_scenario(name);
    s.duration = std::min(s.duration, 1.5);
    EXPECT_EQ(csv(run_scenario(s)), csv(run_scenario(s))) << name;
  }
  const Scenario r = random_scenario(7, {0.5, 1e-3, PassivationMethod::StiffnessChange});
  EXPECT_EQ(csv(run_scenario(r)), csv(run_scenario(r)));
}

TEST(RunScenario, StationaryUntilExternalWrench) {
  for (const char* name : {"fig5_init_deflection", "fig6_init_kdot"}) {
    Scenario s = catalogue_scenario(name);
    s.duration = 0.7;
    const TraceTable t = run_scenario(s);
    const auto time = t.column("time_s");
    const std::vector<std::vector<double>> tw{t.column("vx"), t.column("vy"), t.column("vz"),
                                              t.column("wx"), t.column("wy"), t.column("wz")};
    double late = 0.0;
    for (std::size_t i = 0; i < time.size(); ++i) {
      double n2 = 0.0;
      for (const auto& c : tw) n2 += c[i] * c[i];
      if (time[i] < 0.5 - 1e-9) {
        ASSERT_LT(std::sqrt(n2), 1e-9) << name << " t=" << time[i];
      } else {
        late = std::max(late, std::sqrt(n2));
      }
    }
    EXPECT_GT(late, 1e-3) << name;
  }
}

TEST(RunScenario, EnergiesAreNonNegative) {
  const TraceTable t = run_scenario(random_scenario(3, {1.0, 1e-3, PassivationMethod::DeflectionDiscrete}));
  for (const char* c : {"V_kin_J", "a0_V_pot_J"}) {
    for (double v : t.column(c)) ASSERT_GE(v, 0.0) << c;
  }
}

TEST(LedgerClosure, HoldsAtTwoStepSizes) {
  for (auto method : {PassivationMethod::DeflectionDiscrete, PassivationMethod::StiffnessChange}) {
    for (double dt : {1e-3, 1e-4}) {
      for (std::uint64_t seed : {11u, 12u}) {
        const Scenario s = random_scenario(seed, {1.0, dt, method});
        const double excess = ledger_excess(run_scenario(s));
        EXPECT_LE(excess, kClosureConstant * dt * s.duration)
            << to_string(method) << " dt=" << dt << " seed=" << seed;
      }
    }
  }
}

TEST(LedgerClosure, InitializationScenarios) {
  for (const char* name : {"fig5_init_deflection", "fig6_init_kdot"}) {
    for (double dt : {1e-3, 1e-4}) {
      Scenario s = catalogue_scenario(name);
      s.dt = dt;
      s.plant.dt = dt;
      s.duration = 1.0;
      EXPECT_LE(ledger_excess(run_scenario(s)), kClosureConstant * dt * s.duration) << name << " dt=" << dt;
    }
  }
}

TEST(DiscretePassivity, RandomScenariosHaveNoViolationEnergy) {
  for (auto method : {PassivationMethod::DeflectionDiscrete, PassivationMethod::StiffnessChange}) {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      const auto m = violation_metrics(run_scenario(random_scenario(seed, {2.0, 1e-3, method})), 0.0);
      EXPECT_LE(m.total_energy, 1e-6) << to_string(method) << " seed=" << seed;
    }
  }
}

TEST(DiscretePassivity, UnpassivatedStiffnessJumpViolates) {
  const auto m = violation_metrics(run_scenario(random_scenario(100, {2.0, 1e-3, PassivationMethod::None})), 0.0);
  EXPECT_GT(m.total_energy, 1e-4);
  EXPECT_GT(m.pct_steps, 0.0);
}

TEST(RunScenario, BlowUpAbortsWithStepAndRow) {
  Scenario s = single_attractor(1e15, PassivationMethod::None);
  s.damping.xi = 1e-6;
  s.damping.min_eigenvalue = 0.0;
  s.initial_pose.position = Vec3(0.1, 0, 0);
  try {
    run_scenario(s);
    FAIL() << "expected SimulationAborted";
  } catch (const SimulationAborted& e) {
    EXPECT_LT(e.step(), s.steps());
    EXPECT_EQ(e.row().size(), trace_columns(1).size());
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(RunScenario, InvalidScenarioIsRejected) {
  Scenario s = single_attractor(10.0, PassivationMethod::DeflectionDiscrete);
  s.dt = -1.0;
  EXPECT_THROW(run_scenario(s), ContractViolation);
}
