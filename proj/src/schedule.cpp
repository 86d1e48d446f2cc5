#include "vipass/schedule.hpp"

#include <cmath>

namespace vipass {

namespace {

template <class Keys>
void check_sorted(const Keys& keys, const char* what) {
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (!(keys[i].t >= keys[i - 1].t)) throw ContractViolation(std::string(what) + ": keys must be sorted by time");
  }
}

// Index of the last key with t_key <= t, or -1 when t precedes every key.
template <class Keys>
std::ptrdiff_t last_at_or_before(const Keys& keys, double t) {
  std::ptrdiff_t idx = -1;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i].t <= t + kTimeTolerance) idx = static_cast<std::ptrdiff_t>(i);
    else break;
  }
  return idx;
}

}  // namespace

MatrixSchedule MatrixSchedule::Constant(const Mat6& value) {
  MatrixSchedule s;
  s.keys.push_back({0.0, value});
  return s;
}

void MatrixSchedule::validate() const {
  if (keys.empty()) throw ContractViolation("MatrixSchedule: no keys");
  check_sorted(keys, "MatrixSchedule");
  for (const auto& k : keys) {
    if (!k.value.allFinite()) throw ContractViolation("MatrixSchedule: non-finite value");
  }
}

Mat6 MatrixSchedule::at(double t) const {
  Mat6 out;
  const auto idx = last_at_or_before(keys, t);
  if (idx < 0) {
    out = keys.front().value;
  } else if (interpolation == Interpolation::Step || idx + 1 == static_cast<std::ptrdiff_t>(keys.size())) {
    out = keys[idx].value;
  } else {
    const auto& a = keys[idx];
    const auto& b = keys[idx + 1];
    const double span = b.t - a.t;
    const double s = span > 0.0 ? std::clamp((t - a.t) / span, 0.0, 1.0) : 1.0;
    out = (1.0 - s) * a.value + s * b.value;
  }
  if (sinusoid) {
    const double f = std::sin(sinusoid->omega * t + sinusoid->phase);
    out.diagonal() += sinusoid->amplitude * f;
  }
  return out;
}

PoseSchedule PoseSchedule::Constant(const Pose& pose) {
  PoseSchedule s;
  s.keys.push_back({0.0, pose});
  return s;
}

void PoseSchedule::validate() const {
  if (keys.empty() && polyline.empty()) throw ContractViolation("PoseSchedule: no keys and no polyline");
  check_sorted(keys, "PoseSchedule");
}

Pose PoseSchedule::at(double t, const Vec3& ee_position) const {
  if (is_polyline()) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < polyline.size(); ++i) {
      const double d = (polyline[i].position - ee_position).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return polyline[best];
  }

  Pose out;
  const auto idx = last_at_or_before(keys, t);
  if (idx < 0) {
    out = keys.front().pose;
  } else if (interpolation == Interpolation::Step || idx + 1 == static_cast<std::ptrdiff_t>(keys.size())) {
    out = keys[idx].pose;
  } else {
    const auto& a = keys[idx];
    const auto& b = keys[idx + 1];
    const double span = b.t - a.t;
    const double s = span > 0.0 ? std::clamp((t - a.t) / span, 0.0, 1.0) : 1.0;
    out.position = (1.0 - s) * a.pose.position + s * b.pose.position;
    out.orientation = UnitQuaternion(a.pose.orientation.eigen().slerp(s, b.pose.orientation.eigen()));
  }
  if (sinusoid) {
    out.position += sinusoid->amplitude * std::sin(2.0 * M_PI * sinusoid->frequency_hz * t + sinusoid->phase);
  }
  return out;
}

Vec6 WrenchSegment::at(double t) const {
  if (t + kTimeTolerance < t_start || t + kTimeTolerance >= t_end) return Vec6::Zero();
  if (kind == Kind::Constant) return value;
  return value * std::sin(2.0 * M_PI * frequency_hz * t + phase);
}

Vec6 WrenchProfile::at(double t) const {
  Vec6 sum = Vec6::Zero();
  for (const auto& s : segments) sum += s.at(t);
  return sum;
}

int IdSchedule::at(double t) const {
  if (keys.empty()) return 0;
  const auto idx = last_at_or_before(keys, t);
  return idx < 0 ? keys.front().id : keys[idx].id;
}

}  // namespace vipass
