#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "vipass/catalogue.hpp"
#include "vipass/scenario.hpp"

using namespace vipass;

namespace {

const char* kMinimal = R"({
  "duration": 0.5,
  "dt": 0.001,
  "method": "stiffness_change",
  "attractors": [
    {"pose": {"keys": [{"t": 0, "position": [0.1, 0, 0]}]},
     "stiffness": {"keys": [{"t": 0, "diag": [100, 100, 100, 10, 10, 10]},
                            {"t": 0.2, "scalar": 300}]}}
  ],
  "external_wrench": [{"kind": "step", "value": [0, 0, -5, 0, 0, 0], "start": 0.1, "end": 0.3}]
})";

}  // namespace

TEST(ScenarioJson, MinimalDocumentUsesDefaults) {
  const Scenario s = parse_scenario_json(kMinimal);
  EXPECT_EQ(s.steps(), 500u);
  EXPECT_EQ(s.method, PassivationMethod::StiffnessChange);
  EXPECT_EQ(s.arbitration, ArbitrationKind::None);
  ASSERT_EQ(s.attractors.size(), 1u);
  EXPECT_EQ(s.attractors[0].chart.kind, ManifoldChart::Kind::Cartesian);
  EXPECT_EQ(s.plant.mass, PlantParams::Default().mass);
  EXPECT_DOUBLE_EQ(s.attractors[0].stiffness.at(0.1)(3, 3), 10.0);
  EXPECT_DOUBLE_EQ(s.attractors[0].stiffness.at(0.2)(3, 3), 300.0);
  EXPECT_DOUBLE_EQ(s.attractors[0].pose.at(0.3).position.x(), 0.1);
  EXPECT_EQ(s.external_wrench.at(0.05)(2), 0.0);
  EXPECT_EQ(s.external_wrench.at(0.2)(2), -5.0);
  EXPECT_EQ(s.external_wrench.at(0.3)(2), 0.0);
  EXPECT_EQ(s.tank.level, s.tank.capacity);
}

TEST(ScenarioJson, CatalogueRoundTripIsStable) {
  for (const auto& name : catalogue_names()) {
    SCOPED_TRACE(name);
    const Scenario original = catalogue_scenario(name);
    const std::string first = scenario_to_json(original);
    const Scenario parsed = parse_scenario_json(first);
    const std::string second = scenario_to_json(parsed);
    EXPECT_EQ(second, scenario_to_json(parse_scenario_json(second)));
    EXPECT_EQ(parsed.steps(), original.steps());
    EXPECT_EQ(parsed.method, original.method);
    EXPECT_EQ(parsed.attractors.size(), original.attractors.size());
    for (std::size_t i = 0; i < parsed.attractors.size(); ++i) {
      for (double t : {0.0, 0.37, 1.5, 4.2}) {
        EXPECT_LT((parsed.attractors[i].stiffness.at(t) - original.attractors[i].stiffness.at(t)).norm(), 1e-9);
        const Pose a = parsed.attractors[i].pose.at(t);
        const Pose b = original.attractors[i].pose.at(t);
        EXPECT_LT((a.position - b.position).norm(), 1e-12);
        EXPECT_TRUE(a.orientation.same_rotation(b.orientation, 1e-12));
      }
    }
    for (double t : {0.0, 0.37, 1.5, 7.5}) {
      EXPECT_LT((parsed.external_wrench.at(t) - original.external_wrench.at(t)).norm(), 1e-12);
    }
  }
}

TEST(ScenarioJson, RandomScenarioRoundTrips) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario s = random_scenario(seed);
    const std::string text = scenario_to_json(s);
    EXPECT_EQ(scenario_to_json(parse_scenario_json(text)), scenario_to_json(parse_scenario_json(
                                                                  scenario_to_json(parse_scenario_json(text)))));
  }
}

TEST(ScenarioJson, MalformedJsonIsRejected) {
  EXPECT_THROW(parse_scenario_json("{\"dt\": "), ContractViolation);
  EXPECT_THROW(parse_scenario_json("[1, 2]"), ContractViolation);
}

TEST(ScenarioJson, InvalidValuesAreRejected) {
  EXPECT_THROW(parse_scenario_json(R"({"method": "magic"})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"arbitration": "vote"})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"dt": 0})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"duration": -1})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"damping": {"xi": 2}})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"damping": {"source": "other"}})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"plant": {"mass": {"diag": [1, 2, 3]}}})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"attractors": [{"stiffness": {"scalar": 1}}]})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"attractors": [{"pose": {}, "stiffness": {"scalar": 1},
                                        "chart": {"kind": "spherical"}}]})"),
               ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"tank": {"capacity": 1, "level": 2}})"), ContractViolation);
  EXPECT_THROW(parse_scenario_json(R"({"dt": "fast"})"), ContractViolation);
}

TEST(ScenarioJson, MissingFileNamesThePath) {
  try {
    load_scenario_file("/nonexistent/scenario.json");
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/scenario.json"), std::string::npos);
  }
}

TEST(ScenarioJson, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "vipass_scenario_test.json";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  EXPECT_EQ(load_scenario_file(path).steps(), 500u);
  std::filesystem::remove(path);
}

TEST(Methods, NamesRoundTrip) {
  for (auto m : {PassivationMethod::None, PassivationMethod::DeflectionContinuous, PassivationMethod::DeflectionDiscrete,
                 PassivationMethod::StiffnessChange, PassivationMethod::TankBaseline}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  for (auto k : {ArbitrationKind::None, ArbitrationKind::Fixed, ArbitrationKind::GaussianProduct}) {
    EXPECT_EQ(parse_arbitration(to_string(k)), k);
  }
}

TEST(MatrixSchedule, StepAndLinearInterpolation) {
  MatrixSchedule s;
  s.keys = {{0.0, Mat6::Zero()}, {1.0, 10 * Mat6::Identity()}};
  EXPECT_EQ(s.at(0.5), Mat6::Zero());
  EXPECT_EQ(s.at(1.0), 10 * Mat6::Identity());
  EXPECT_EQ(s.at(1.0 - 1e-12), 10 * Mat6::Identity());
  s.interpolation = Interpolation::Linear;
  EXPECT_NEAR(s.at(0.25)(0, 0), 2.5, 1e-12);
  EXPECT_EQ(s.at(-1.0), Mat6::Zero());
  EXPECT_EQ(s.at(5.0), 10 * Mat6::Identity());
}

TEST(MatrixSchedule, DiagonalSinusoid) {
  MatrixSchedule s = MatrixSchedule::Constant(100 * Mat6::Identity());
  s.sinusoid = MatrixSchedule::DiagonalSinusoid{Vec6::Constant(50.0), 2.0, 0.0};
  EXPECT_NEAR(s.at(M_PI / 4)(1, 1), 150.0, 1e-9);
  EXPECT_EQ(s.at(M_PI / 4)(0, 1), 0.0);
}

TEST(MatrixSchedule, ValidateRejectsUnsortedOrEmpty) {
  MatrixSchedule s;
  EXPECT_THROW(s.validate(), ContractViolation);
  s.keys = {{1.0, Mat6::Zero()}, {0.5, Mat6::Zero()}};
  EXPECT_THROW(s.validate(), ContractViolation);
}

TEST(PoseSchedule, PolylineTakesNearestVertex) {
  PoseSchedule s;
  s.polyline = {Pose{Vec3(0, 0, 0), UnitQuaternion()}, Pose{Vec3(1, 0, 0), UnitQuaternion()},
                Pose{Vec3(2, 0, 0), UnitQuaternion()}};
  EXPECT_EQ(s.at(0.0, Vec3(0.9, 0.3, 0)).position, Vec3(1, 0, 0));
  EXPECT_EQ(s.at(3.0, Vec3(1.6, 0, 0)).position, Vec3(2, 0, 0));
}

TEST(PoseSchedule, LinearKeysSlerpOrientation) {
  PoseSchedule s;
  s.keys = {{0.0, Pose::Identity()},
            {1.0, Pose{Vec3(1, 0, 0), UnitQuaternion::from_rotation_vector(Vec3(0, 0, 1.0))}}};
  const Pose mid = s.at(0.5);
  EXPECT_NEAR(mid.position.x(), 0.5, 1e-12);
  EXPECT_NEAR(mid.orientation.rotation_vector().z(), 0.5, 1e-12);
}

TEST(WrenchProfile, SegmentsAreHalfOpenAndAdd) {
  WrenchProfile p;
  WrenchSegment a;
  a.value(0) = 1.0;
  a.t_start = 1.0;
  a.t_end = 2.0;
  WrenchSegment b;
  b.kind = WrenchSegment::Kind::Sinusoid;
  b.value(1) = 2.0;
  b.frequency_hz = 1.0;
  p.segments = {a, b};
  EXPECT_EQ(p.at(0.5)(0), 0.0);
  EXPECT_EQ(p.at(1.0)(0), 1.0);
  EXPECT_EQ(p.at(2.0)(0), 0.0);
  EXPECT_NEAR(p.at(0.25)(1), 2.0, 1e-12);
}

TEST(IdSchedule, LastKeyAtOrBeforeWins) {
  IdSchedule s;
  s.keys = {{0.0, 3}, {1.0, 7}};
  EXPECT_EQ(s.at(-0.5), 3);
  EXPECT_EQ(s.at(0.99), 3);
  EXPECT_EQ(s.at(1.0), 7);
}
