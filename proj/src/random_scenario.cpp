#include <cmath>
#include <random>

#include "vipass/catalogue.hpp"

namespace vipass {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vec3 direction() {
    std::normal_distribution<double> g;
    Vec3 v(g(rng_), g(rng_), g(rng_));
    while (v.norm() < 1e-9) v = Vec3(g(rng_), g(rng_), g(rng_));
    return v.normalized();
  }

  Mat3 rotation() { return UnitQuaternion::from_axis_angle(direction(), uniform(0.0, M_PI)).matrix(); }

  // Random SPD 3x3 block with eigenvalues in [lo, hi] and random axes.
  Mat3 block(double lo, double hi) {
    const Mat3 r = rotation();
    const Vec3 ev(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
    return r * ev.asDiagonal() * r.transpose();
  }

  Mat6 stiffness(double t_lo, double t_hi, double r_lo, double r_hi) {
    Mat6 k = Mat6::Zero();
    k.topLeftCorner<3, 3>() = block(t_lo, t_hi);
    k.bottomRightCorner<3, 3>() = block(r_lo, r_hi);
    return symmetric_part(k);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options) {
  Sampler rnd(seed);
  Scenario s;
  s.name = "random_" + std::to_string(seed);
  s.duration = options.duration;
  s.dt = options.dt;
  s.method = options.method;
  s.ee_velocity_cutoff_hz = 0.0;
  s.plant.dt = s.dt;

  const double T = s.duration;
  const int n_att = rnd.integer(1, 2);
  for (int i = 0; i < n_att; ++i) {
    AttractorConfig a;
    const Vec3 p = rnd.direction() * rnd.uniform(0.0, 0.05);
    const Vec3 phi = rnd.direction() * rnd.uniform(0.0, 0.2);
    a.pose = PoseSchedule::Constant({p, UnitQuaternion::from_rotation_vector(phi)});
    a.initially_active = rnd.integer(0, 1) == 1;

    // Low stiffness, then a one-tick jump up while the push keeps the
    // spring deflected, a ramp, and a second jump in either direction.
    a.stiffness.interpolation = Interpolation::Linear;
    const Mat6 k_low = rnd.stiffness(50.0, 300.0, 2.0, 10.0);
    const Mat6 k_high = rnd.stiffness(1000.0, 3000.0, 30.0, 100.0);
    const Mat6 k_ramp = rnd.stiffness(0.0, 3000.0, 0.0, 100.0);
    const Mat6 k_last = rnd.stiffness(0.0, 3000.0, 0.0, 100.0);
    const double t_jump = rnd.uniform(0.3, 0.45) * T;
    const double t_ramp = t_jump + rnd.uniform(0.1, 0.2) * T;
    const double t_last = t_ramp + rnd.uniform(0.05, 0.15) * T;
    a.stiffness.keys = {{0.0, k_low},
                        {t_jump, k_low},
                        {t_jump + s.dt, k_high},
                        {t_ramp, k_ramp},
                        {t_last, k_ramp},
                        {t_last + s.dt, k_last}};
    s.attractors.push_back(a);
  }

  // Wrench magnitudes add up to at most 50 N and 5 N m.
  WrenchSegment constant;
  constant.value << rnd.direction() * rnd.uniform(10.0, 20.0), rnd.direction() * rnd.uniform(0.0, 2.0);
  s.external_wrench.segments.push_back(constant);

  WrenchSegment wave;
  wave.kind = WrenchSegment::Kind::Sinusoid;
  wave.value << rnd.direction() * rnd.uniform(0.0, 15.0), rnd.direction() * rnd.uniform(0.0, 1.5);
  wave.frequency_hz = rnd.uniform(0.2, 5.0);
  wave.phase = rnd.uniform(0.0, 2.0 * M_PI);
  s.external_wrench.segments.push_back(wave);

  WrenchSegment pulse;
  pulse.value << rnd.direction() * rnd.uniform(0.0, 15.0), rnd.direction() * rnd.uniform(0.0, 1.5);
  pulse.t_start = rnd.uniform(0.0, 0.8) * T;
  pulse.t_end = pulse.t_start + rnd.uniform(0.05, 0.2) * T;
  s.external_wrench.segments.push_back(pulse);

  s.validate();
  return s;
}

}  // namespace vipass
