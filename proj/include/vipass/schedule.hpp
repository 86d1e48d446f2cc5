#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "vipass/geom.hpp"

namespace vipass {

enum class Interpolation { Step, Linear };

/// Tolerance used when comparing the simulation clock with key times, so
/// that t = n dt lands on a key placed at the same instant.
inline constexpr double kTimeTolerance = 1e-9;

/// Piecewise 6x6 matrix signal. Keys are sorted by time; before the first
/// key the first value holds, after the last key the last value holds.
/// An optional diagonal sinusoid amplitude * sin(omega t + phase) is added.
struct MatrixSchedule {
  struct Key {
    double t = 0.0;
    Mat6 value = Mat6::Zero();
  };
  struct DiagonalSinusoid {
    Vec6 amplitude = Vec6::Zero();
    double omega = 1.0;  // rad/s
    double phase = 0.0;  // rad
  };

  std::vector<Key> keys;
  Interpolation interpolation = Interpolation::Step;
  std::optional<DiagonalSinusoid> sinusoid;

  static MatrixSchedule Constant(const Mat6& value);

  /// Throws ContractViolation on empty or unsorted keys.
  void validate() const;
  Mat6 at(double t) const;
};

/// Attractor pose over time. Either keyframes (step or linear position with
/// slerped orientation), optionally with a sinusoidal position offset, or a
/// polyline of which the vertex nearest to the end effector is taken.
struct PoseSchedule {
  struct Key {
    double t = 0.0;
    Pose pose;
  };
  struct PositionSinusoid {
    Vec3 amplitude = Vec3::Zero();
    double frequency_hz = 0.0;
    double phase = 0.0;  // rad
  };

  std::vector<Key> keys;
  Interpolation interpolation = Interpolation::Linear;
  std::optional<PositionSinusoid> sinusoid;
  std::vector<Pose> polyline;  // non-empty selects nearest-vertex mode

  static PoseSchedule Constant(const Pose& pose);

  bool is_polyline() const { return !polyline.empty(); }
  void validate() const;
  Pose at(double t, const Vec3& ee_position = Vec3::Zero()) const;
};

/// One additive term of an external wrench. Active on [t_start, t_end).
struct WrenchSegment {
  enum class Kind { Constant, Sinusoid };

  Kind kind = Kind::Constant;
  Vec6 value = Vec6::Zero();  // constant value or sinusoid amplitude
  double frequency_hz = 0.0;
  double phase = 0.0;  // rad
  double t_start = -std::numeric_limits<double>::infinity();
  double t_end = std::numeric_limits<double>::infinity();

  Vec6 at(double t) const;
};

/// Sum of segments; expressed in world axes.
struct WrenchProfile {
  std::vector<WrenchSegment> segments;

  Vec6 at(double t) const;
};

/// Integer id over time (attractor replacement); the last key with
/// t_key <= t wins, the first key's id holds before it.
struct IdSchedule {
  struct Key {
    double t = 0.0;
    int id = 0;
  };
  std::vector<Key> keys;

  int at(double t) const;
};

}  // namespace vipass
