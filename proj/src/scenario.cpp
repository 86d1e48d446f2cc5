#include "vipass/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vipass {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ContractViolation("scenario: " + msg); }

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) fail(std::string("missing key '") + key + "'");
  return j.at(key);
}

double num(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j.at(key), key) : fallback;
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) fail(std::string(what) + " must be an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = num(j[i], what);
  return v;
}

// {"diag": [6]} | {"matrix": [[6] x 6]} | {"scalar": s} | a bare 6-array (diagonal).
Mat6 matrix(const json& j, const char* what) {
  if (j.is_array() && !j.empty() && j[0].is_number()) return Mat6(vec<6>(j, what).asDiagonal());
  if (j.is_number()) return num(j, what) * Mat6::Identity();
  if (!j.is_object()) fail(std::string(what) + " must be an object");
  if (j.contains("diag")) return Mat6(vec<6>(j.at("diag"), what).asDiagonal());
  if (j.contains("scalar")) return num(j.at("scalar"), what) * Mat6::Identity();
  if (j.contains("matrix")) {
    const json& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != 6) fail(std::string(what) + ".matrix must have 6 rows");
    Mat6 m;
    for (int r = 0; r < 6; ++r) m.row(r) = vec<6>(rows[r], what).transpose();
    return m;
  }
  fail(std::string(what) + " needs one of diag, scalar, matrix");
}

json matrix_to_json(const Mat6& m) {
  const Mat6 off = m - Mat6(m.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    json diag = json::array();
    for (int i = 0; i < 6; ++i) diag.push_back(m(i, i));
    return json{{"diag", diag}};
  }
  json rows = json::array();
  for (int r = 0; r < 6; ++r) {
    json row = json::array();
    for (int c = 0; c < 6; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return json{{"matrix", rows}};
}

template <class V>
json vec_to_json(const V& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Interpolation interpolation(const json& j, Interpolation fallback) {
  if (!j.contains("interpolation")) return fallback;
  const auto s = j.at("interpolation").get<std::string>();
  if (s == "step") return Interpolation::Step;
  if (s == "linear") return Interpolation::Linear;
  fail("unknown interpolation '" + s + "'");
}

const char* interpolation_name(Interpolation i) { return i == Interpolation::Step ? "step" : "linear"; }

UnitQuaternion orientation(const json& j) {
  if (j.contains("orientation")) {
    const Eigen::Vector4d q = vec<4>(j.at("orientation"), "orientation");
    return UnitQuaternion(q(0), q(1), q(2), q(3));
  }
  if (j.contains("rotation_vector")) return UnitQuaternion::from_rotation_vector(vec<3>(j.at("rotation_vector"), "rotation_vector"));
  return UnitQuaternion::Identity();
}

Pose pose(const json& j) {
  Pose p;
  if (j.contains("position")) p.position = vec<3>(j.at("position"), "position");
  p.orientation = orientation(j);
  return p;
}

json pose_to_json(const Pose& p) {
  const auto& q = p.orientation;
  return json{{"position", vec_to_json(p.position)}, {"orientation", {q.w(), q.x(), q.y(), q.z()}}};
}

MatrixSchedule matrix_schedule(const json& j, const char* what, Interpolation fallback) {
  MatrixSchedule s;
  if (!j.is_object() || !j.contains("keys")) {
    // Shorthand: a constant matrix.
    return MatrixSchedule::Constant(matrix(j, what));
  }
  s.interpolation = interpolation(j, fallback);
  for (const auto& k : j.at("keys")) {
    s.keys.push_back({get_or(k, "t", 0.0), matrix(k, what)});
  }
  if (j.contains("sin_diag")) {
    const json& sj = j.at("sin_diag");
    MatrixSchedule::DiagonalSinusoid sin;
    sin.amplitude = vec<6>(require(sj, "amplitude"), "sin_diag.amplitude");
    sin.omega = get_or(sj, "omega", 1.0);
    sin.phase = get_or(sj, "phase", 0.0);
    s.sinusoid = sin;
  }
  s.validate();
  return s;
}

json matrix_schedule_to_json(const MatrixSchedule& s) {
  json keys = json::array();
  for (const auto& k : s.keys) {
    json kj = matrix_to_json(k.value);
    kj["t"] = k.t;
    keys.push_back(kj);
  }
  json j{{"interpolation", interpolation_name(s.interpolation)}, {"keys", keys}};
  if (s.sinusoid) {
    j["sin_diag"] = {{"amplitude", vec_to_json(s.sinusoid->amplitude)},
                     {"omega", s.sinusoid->omega},
                     {"phase", s.sinusoid->phase}};
  }
  return j;
}

PoseSchedule pose_schedule(const json& j) {
  PoseSchedule s;
  if (j.contains("polyline")) {
    for (const auto& v : j.at("polyline")) s.polyline.push_back(pose(v));
  }
  if (j.contains("keys")) {
    s.interpolation = interpolation(j, Interpolation::Linear);
    for (const auto& k : j.at("keys")) s.keys.push_back({get_or(k, "t", 0.0), pose(k)});
  } else if (!s.is_polyline()) {
    s.keys.push_back({0.0, pose(j)});
  }
  if (j.contains("sinusoid")) {
    const json& sj = j.at("sinusoid");
    PoseSchedule::PositionSinusoid sin;
    sin.amplitude = vec<3>(require(sj, "amplitude"), "sinusoid.amplitude");
    sin.frequency_hz = get_or(sj, "frequency_hz", 0.0);
    sin.phase = get_or(sj, "phase", 0.0);
    s.sinusoid = sin;
  }
  s.validate();
  return s;
}

json pose_schedule_to_json(const PoseSchedule& s) {
  json j = json::object();
  if (s.is_polyline()) {
    json poly = json::array();
    for (const auto& p : s.polyline) poly.push_back(pose_to_json(p));
    j["polyline"] = poly;
  } else {
    json keys = json::array();
    for (const auto& k : s.keys) {
      json kj = pose_to_json(k.pose);
      kj["t"] = k.t;
      keys.push_back(kj);
    }
    j["interpolation"] = interpolation_name(s.interpolation);
    j["keys"] = keys;
  }
  if (s.sinusoid) {
    j["sinusoid"] = {{"amplitude", vec_to_json(s.sinusoid->amplitude)},
                     {"frequency_hz", s.sinusoid->frequency_hz},
                     {"phase", s.sinusoid->phase}};
  }
  return j;
}

ManifoldChart chart(const json& j) {
  const auto kind = j.value("kind", std::string("cartesian"));
  if (kind == "cartesian") return ManifoldChart::Cartesian();
  if (kind != "cylindrical") fail("unknown chart kind '" + kind + "'");
  Pose frame;
  if (j.contains("origin")) frame.position = vec<3>(j.at("origin"), "chart.origin");
  frame.orientation = orientation(j);
  return ManifoldChart::Cylindrical(frame, get_or(j, "r_min", 0.01));
}

json chart_to_json(const ManifoldChart& c) {
  if (c.kind == ManifoldChart::Kind::Cartesian) return json{{"kind", "cartesian"}};
  const auto& q = c.frame.orientation;
  return json{{"kind", "cylindrical"},
              {"origin", vec_to_json(c.frame.position)},
              {"orientation", {q.w(), q.x(), q.y(), q.z()}},
              {"r_min", c.r_min}};
}

WrenchSegment wrench_segment(const json& j) {
  WrenchSegment s;
  const auto kind = j.value("kind", std::string("constant"));
  if (kind == "constant" || kind == "step") {
    s.kind = WrenchSegment::Kind::Constant;
    s.value = vec<6>(require(j, "value"), "wrench.value");
  } else if (kind == "sinusoid") {
    s.kind = WrenchSegment::Kind::Sinusoid;
    s.value = vec<6>(require(j, "amplitude"), "wrench.amplitude");
    s.frequency_hz = get_or(j, "frequency_hz", 0.0);
    s.phase = get_or(j, "phase", 0.0);
  } else {
    fail("unknown wrench segment kind '" + kind + "'");
  }
  if (kind == "step") s.t_start = num(require(j, "start"), "wrench.start");
  s.t_start = get_or(j, "start", s.t_start);
  s.t_end = get_or(j, "end", s.t_end);
  return s;
}

json wrench_segment_to_json(const WrenchSegment& s) {
  json j;
  if (s.kind == WrenchSegment::Kind::Constant) {
    j = {{"kind", "constant"}, {"value", vec_to_json(s.value)}};
  } else {
    j = {{"kind", "sinusoid"}, {"amplitude", vec_to_json(s.value)}, {"frequency_hz", s.frequency_hz}, {"phase", s.phase}};
  }
  if (std::isfinite(s.t_start)) j["start"] = s.t_start;
  if (std::isfinite(s.t_end)) j["end"] = s.t_end;
  return j;
}

AttractorConfig attractor(const json& j) {
  AttractorConfig a;
  if (j.contains("ids")) {
    for (const auto& k : j.at("ids")) a.ids.keys.push_back({get_or(k, "t", 0.0), require(k, "id").get<int>()});
  } else if (j.contains("id")) {
    a.ids.keys.push_back({0.0, j.at("id").get<int>()});
  }
  a.pose = pose_schedule(require(j, "pose"));
  a.stiffness = matrix_schedule(require(j, "stiffness"), "stiffness", Interpolation::Step);
  if (j.contains("chart")) a.chart = chart(j.at("chart"));
  a.initially_active = j.value("initially_active", false);
  if (j.contains("scaling")) a.scaling = matrix_schedule(j.at("scaling"), "scaling", Interpolation::Step);
  if (j.contains("covariance")) a.covariance = matrix_schedule(j.at("covariance"), "covariance", Interpolation::Step);
  return a;
}

json attractor_to_json(const AttractorConfig& a) {
  json j{{"pose", pose_schedule_to_json(a.pose)},
         {"stiffness", matrix_schedule_to_json(a.stiffness)},
         {"chart", chart_to_json(a.chart)},
         {"initially_active", a.initially_active},
         {"scaling", matrix_schedule_to_json(a.scaling)},
         {"covariance", matrix_schedule_to_json(a.covariance)}};
  if (!a.ids.keys.empty()) {
    json ids = json::array();
    for (const auto& k : a.ids.keys) ids.push_back({{"t", k.t}, {"id", k.id}});
    j["ids"] = ids;
  }
  return j;
}

}  // namespace

std::string_view to_string(PassivationMethod m) {
  switch (m) {
    case PassivationMethod::None: return "none";
    case PassivationMethod::DeflectionContinuous: return "deflection_continuous";
    case PassivationMethod::DeflectionDiscrete: return "deflection_discrete";
    case PassivationMethod::StiffnessChange: return "stiffness_change";
    case PassivationMethod::TankBaseline: return "tank_baseline";
  }
  return "?";
}

std::string_view to_string(ArbitrationKind k) {
  switch (k) {
    case ArbitrationKind::None: return "none";
    case ArbitrationKind::Fixed: return "fixed";
    case ArbitrationKind::GaussianProduct: return "gaussian_product";
  }
  return "?";
}

PassivationMethod parse_method(std::string_view name) {
  for (auto m : {PassivationMethod::None, PassivationMethod::DeflectionContinuous, PassivationMethod::DeflectionDiscrete,
                 PassivationMethod::StiffnessChange, PassivationMethod::TankBaseline}) {
    if (to_string(m) == name) return m;
  }
  throw ContractViolation("unknown passivation method '" + std::string(name) + "'");
}

ArbitrationKind parse_arbitration(std::string_view name) {
  for (auto k : {ArbitrationKind::None, ArbitrationKind::Fixed, ArbitrationKind::GaussianProduct}) {
    if (to_string(k) == name) return k;
  }
  throw ContractViolation("unknown arbitration '" + std::string(name) + "'");
}

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

void Scenario::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("scenario: dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ContractViolation("scenario: duration must be non-negative");
  if (!(ee_velocity_cutoff_hz >= 0.0 && attractor_velocity_cutoff_hz >= 0.0)) {
    throw ContractViolation("scenario: filter cutoffs must be non-negative");
  }
  if (!(damping.xi > 0.0 && damping.xi <= 1.0)) throw ContractViolation("scenario: damping.xi must be in (0, 1]");
  if (!(damping.min_eigenvalue >= 0.0)) throw ContractViolation("scenario: damping.min_eigenvalue must be >= 0");
  if (!(epsilon >= 0.0)) throw ContractViolation("scenario: epsilon must be >= 0");
  if (!(curl_allowance >= 0.0)) throw ContractViolation("scenario: curl_allowance must be >= 0");
  if (!(initial_energy.remaining >= 0.0 && initial_energy.rate_limit >= 0.0)) {
    throw ContractViolation("scenario: initial energy budget and rate must be >= 0");
  }
  tank.validate();
  PlantParams p = plant;
  p.dt = dt;
  p.validate();
  for (const auto& a : attractors) {
    a.pose.validate();
    a.stiffness.validate();
    a.scaling.validate();
    a.covariance.validate();
  }
}

Scenario parse_scenario_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  try {
    Scenario s;
    s.name = j.value("name", std::string());
    s.duration = get_or(j, "duration", s.duration);
    s.dt = get_or(j, "dt", s.dt);
    s.plant = PlantParams::Default(s.dt);
    if (j.contains("plant")) {
      const json& pj = j.at("plant");
      if (pj.contains("mass")) s.plant.mass = matrix(pj.at("mass"), "plant.mass");
      if (pj.contains("damping")) s.plant.damping = matrix(pj.at("damping"), "plant.damping");
      if (pj.contains("wall")) {
        const json& wj = pj.at("wall");
        Wall w;
        if (wj.contains("normal")) w.normal = vec<3>(wj.at("normal"), "wall.normal");
        w.offset = get_or(wj, "offset", w.offset);
        w.stiffness = get_or(wj, "stiffness", w.stiffness);
        w.damping = get_or(wj, "damping", w.damping);
        s.plant.wall = w;
      }
    }
    s.plant.dt = s.dt;
    if (j.contains("initial_pose")) s.initial_pose = pose(j.at("initial_pose"));
    if (j.contains("initial_twist")) s.initial_twist = Twist(vec<6>(j.at("initial_twist"), "initial_twist"));
    if (j.contains("filters")) {
      s.ee_velocity_cutoff_hz = get_or(j.at("filters"), "ee_velocity_hz", s.ee_velocity_cutoff_hz);
      s.attractor_velocity_cutoff_hz = get_or(j.at("filters"), "attractor_velocity_hz", s.attractor_velocity_cutoff_hz);
    }
    if (j.contains("method")) s.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("arbitration")) s.arbitration = parse_arbitration(j.at("arbitration").get<std::string>());
    if (j.contains("damping")) {
      const json& dj = j.at("damping");
      s.damping.xi = get_or(dj, "xi", s.damping.xi);
      s.damping.min_eigenvalue = get_or(dj, "min_eigenvalue", s.damping.min_eigenvalue);
      const auto src = dj.value("source", std::string("passivated"));
      if (src == "passivated") s.damping.source = DampingSource::Passivated;
      else if (src == "nominal") s.damping.source = DampingSource::Nominal;
      else fail("unknown damping.source '" + src + "'");
      const auto mode = dj.value("power", std::string("quadratic"));
      if (mode == "quadratic") s.damping.power_mode = DampingPowerMode::Quadratic;
      else if (mode == "lagged") s.damping.power_mode = DampingPowerMode::Lagged;
      else fail("unknown damping.power '" + mode + "'");
    }
    s.epsilon = get_or(j, "epsilon", s.epsilon);
    s.curl_allowance = get_or(j, "curl_allowance", s.curl_allowance);
    if (j.contains("initial_energy")) {
      s.initial_energy.remaining = get_or(j.at("initial_energy"), "budget", 0.0);
      s.initial_energy.rate_limit = get_or(j.at("initial_energy"), "rate", 0.0);
    }
    if (j.contains("tank")) {
      const json& tj = j.at("tank");
      s.tank.capacity = get_or(tj, "capacity", s.tank.capacity);
      s.tank.floor = get_or(tj, "floor", s.tank.floor);
      s.tank.level = get_or(tj, "level", s.tank.capacity);
    }
    s.scale_damping_wrench = j.value("scale_damping_wrench", false);
    if (j.contains("attractors")) {
      for (const auto& aj : j.at("attractors")) s.attractors.push_back(attractor(aj));
    }
    if (j.contains("external_wrench")) {
      for (const auto& wj : j.at("external_wrench")) s.external_wrench.segments.push_back(wrench_segment(wj));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    fail(std::string("invalid value: ") + e.what());
  }
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_json(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["duration"] = s.duration;
  j["dt"] = s.dt;
  json plant{{"mass", matrix_to_json(s.plant.mass)}, {"damping", matrix_to_json(s.plant.damping)}};
  if (s.plant.wall) {
    const auto& w = *s.plant.wall;
    plant["wall"] = {{"normal", vec_to_json(w.normal)}, {"offset", w.offset}, {"stiffness", w.stiffness}, {"damping", w.damping}};
  }
  j["plant"] = plant;
  j["initial_pose"] = pose_to_json(s.initial_pose);
  j["initial_twist"] = vec_to_json(s.initial_twist.value);
  j["filters"] = {{"ee_velocity_hz", s.ee_velocity_cutoff_hz}, {"attractor_velocity_hz", s.attractor_velocity_cutoff_hz}};
  j["method"] = std::string(to_string(s.method));
  j["arbitration"] = std::string(to_string(s.arbitration));
  j["damping"] = {{"xi", s.damping.xi},
                  {"min_eigenvalue", s.damping.min_eigenvalue},
                  {"source", s.damping.source == DampingSource::Passivated ? "passivated" : "nominal"},
                  {"power", s.damping.power_mode == DampingPowerMode::Quadratic ? "quadratic" : "lagged"}};
  j["epsilon"] = s.epsilon;
  j["curl_allowance"] = s.curl_allowance;
  j["initial_energy"] = {{"budget", s.initial_energy.remaining}, {"rate", s.initial_energy.rate_limit}};
  j["tank"] = {{"capacity", s.tank.capacity}, {"floor", s.tank.floor}, {"level", s.tank.level}};
  j["scale_damping_wrench"] = s.scale_damping_wrench;
  json atts = json::array();
  for (const auto& a : s.attractors) atts.push_back(attractor_to_json(a));
  j["attractors"] = atts;
  json wr = json::array();
  for (const auto& seg : s.external_wrench.segments) wr.push_back(wrench_segment_to_json(seg));
  j["external_wrench"] = wr;
  return j.dump(2);
}

}  // namespace vipass
