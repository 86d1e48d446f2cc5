#include "vipass/harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "vipass/arbitration.hpp"

namespace vipass {

namespace {

double quad(const Mat6& k, const Vec6& x) { return x.dot(k * x); }

struct AttractorRuntime {
  AttractorState st;
  LowPassFilter velocity_filter;
  bool chart_ok = true;

  // Measured this tick.
  TangentError dx;
  Twist dv;
  Mat6 T = Mat6::Identity();
  Mat6 T_inv = Mat6::Identity();
  Mat6 S = Mat6::Identity();
  Mat6 K_star = Mat6::Zero();

  // Realized this tick.
  Mat6 K_eff = Mat6::Zero();
  double p_d = 0.0;
  double p_a = 0.0;
  double granted = 0.0;
  Vec6 w_curl = Vec6::Zero();
  Mat6 damp_map = Mat6::Identity();
  Vec6 w_chart = Vec6::Zero();
  Vec6 w_cart = Vec6::Zero();

  // Carried over from the previous tick.
  Mat6 K_eff_prev = Mat6::Zero();
  Mat6 K_d_prev = Mat6::Zero();
  Vec6 w_chart_prev = Vec6::Zero();
  TangentError dx_prev;
  Twist dv_prev;
  bool has_prev = false;
};

Vec6 diag(const Mat6& m) { return m.diagonal(); }

}  // namespace

TraceTable run_scenario(const Scenario& sc) {
  sc.validate();
  const double dt = sc.dt;
  const std::size_t n_steps = sc.steps();
  const std::size_t n_att = sc.attractors.size();

  PlantParams plant = sc.plant;
  plant.dt = dt;

  TraceTable trace;
  trace.columns = trace_columns(n_att);
  trace.extra_columns = {"tank_level_J", "tank_enabled", "init_energy_remaining_J"};
  for (std::size_t i = 0; i < n_att; ++i) {
    const std::string p = "a" + std::to_string(i) + "_";
    trace.extra_columns.push_back(p + "P_a_W");
    trace.extra_columns.push_back(p + "grant_W");
    trace.extra_columns.push_back(p + "chart_ok");
    for (int k = 0; k < 6; ++k) trace.extra_columns.push_back(p + "Keff" + std::to_string(k));
  }
  trace.rows.reserve(n_steps + 1);
  trace.extra_rows.reserve(n_steps + 1);

  PlantState state{sc.initial_pose, sc.initial_twist, 0.0};
  LowPassFilter ee_filter{sc.ee_velocity_cutoff_hz, Vec6::Zero()};
  InitialEnergyBudget budget = sc.initial_energy;
  EnergyTank tank = sc.tank;

  std::vector<AttractorRuntime> att(n_att);
  for (std::size_t i = 0; i < n_att; ++i) {
    att[i].velocity_filter.cutoff_hz = sc.attractor_velocity_cutoff_hz;
    att[i].st.chart = sc.attractors[i].chart;
  }

  double v_inp = 0.0;
  double v_total_prev = 0.0;
  double v_inp_prev = 0.0;

  for (std::size_t n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    state.time = t;
    const Mat3 r_ee = state.pose.orientation.matrix();
    const Vec6 v_ee = filter_step(ee_filter, state.twist.value, dt);

    // Measurement: attractor pose and velocity, deflection, chart maps.
    for (std::size_t i = 0; i < n_att; ++i) {
      auto& a = att[i];
      const auto& cfg = sc.attractors[i];
      const int id = cfg.ids.keys.empty() ? static_cast<int>(i) : cfg.ids.at(t);
      const Pose pose = cfg.pose.at(t, state.pose.position);

      a.chart_ok = true;
      ManifoldChart chart = a.st.chart;
      try {
        a.dx = chart_deflection(chart, state.pose, pose);
        if (n > 0) chart_deflection(chart, state.pose, a.st.pose);
      } catch (const ChartSingularity&) {
        a.chart_ok = false;
        chart = ManifoldChart::Cartesian();
        a.dx = chart_deflection(chart, state.pose, pose);
      }
      const Mat6 jac = deflection_jacobian(chart, state.pose, a.dx);
      a.T = -jac.transpose();
      a.T_inv = a.T.inverse();

      // Attractor motion seen in the chart: the change of the deflection it
      // caused since the last tick, with the end effector held.
      Vec6 attractor_rate = Vec6::Zero();
      if (n > 0) attractor_rate = (a.dx.value - chart_deflection(chart, state.pose, a.st.pose).value) / dt;
      a.st.twist = Twist(filter_step(a.velocity_filter, attractor_rate, dt));
      a.st.prev_pose = n > 0 ? a.st.pose : pose;
      a.st.pose = pose;
      a.dv = Twist(Vec6(jac * v_ee + a.st.twist.value));

      // Close the previous step's attractor port with the realized change
      // of the deflection.
      if (a.has_prev) v_inp += a.w_chart_prev.dot(a.dx.value - a.dx_prev.value);

      bool reset = false;
      if (n == 0) {
        a.st.id = id;
      } else if (id != a.st.id) {
        a.st.id = id;
        reset = true;
      }

      a.K_star = cfg.stiffness.at(t);
      if (sc.arbitration == ArbitrationKind::Fixed) a.S = cfg.scaling.at(t);
      if (reset) {
        a.st.d = 0.0;
        a.st.K_passivated = Mat6::Zero();
      }
    }

    if (sc.arbitration == ArbitrationKind::GaussianProduct && n_att > 0) {
      std::vector<Mat6> covs;
      covs.reserve(n_att);
      for (std::size_t i = 0; i < n_att; ++i) covs.push_back(sc.attractors[i].covariance.at(t));
      const auto scalings = scaling_factors(covs);
      for (std::size_t i = 0; i < n_att; ++i) att[i].S = scalings[i];
    }

    std::vector<Mat6> k_curl(n_att, Mat6::Zero());
    for (std::size_t i = 0; i < n_att; ++i) {
      auto& a = att[i];
      Mat6 k_mod = a.K_star;
      if (sc.arbitration != ArbitrationKind::None) k_mod = scaling_to_stiffness(a.S, a.T, a.K_star);
      const auto split = symmetrize_split(k_mod);
      a.K_star = project_psd(split.symmetric);
      k_curl[i] = split.skew;
      if (n == 0) {
        const bool active = sc.attractors[i].initially_active;
        a.st.d = active ? 1.0 : 0.0;
        a.st.K_nominal = a.K_star;
        a.st.K_passivated = active ? a.K_star : Mat6::Zero();
        a.K_eff_prev = active ? a.K_star : Mat6::Zero();
      }
    }

    const bool tank_enabled = tank.level > tank.floor;
    double tank_p_d = 0.0;
    double tank_p_required = 0.0;
    double granted_total = 0.0;
    Vec6 w_static = Vec6::Zero();
    Mat6 feedback = Mat6::Zero();

    for (std::size_t i = 0; i < n_att; ++i) {
      auto& a = att[i];
      auto& st = a.st;

      const Mat6 m_chart = a.T_inv * plant.mass * a.T_inv.transpose();
      Mat6 k_damp = a.K_star;
      if (sc.damping.source == DampingSource::Passivated && sc.method == PassivationMethod::StiffnessChange) {
        k_damp = st.K_passivated;
      }
      st.K_d = double_diagonalization_damping(symmetric_part(m_chart), k_damp, sc.damping.xi,
                                              sc.damping.min_eigenvalue);
      // The budget is what the damper dissipated over the step just ended,
      // so it is evaluated with the damping that acted there.
      const Mat6& k_d_acted = a.has_prev ? a.K_d_prev : st.K_d;
      const Twist dv_prev = a.has_prev ? a.dv_prev : a.dv;
      a.p_d = damping_power(a.dv, k_d_acted, dv_prev, sc.damping.power_mode);
      a.granted = 0.0;
      a.p_a = 0.0;
      double p_budget = a.p_d;

      switch (sc.method) {
        case PassivationMethod::None:
          st.d = 1.0;
          st.K_nominal = a.K_star;
          st.K_passivated = a.K_star;
          a.K_eff = a.K_star;
          break;
        case PassivationMethod::DeflectionDiscrete:
        case PassivationMethod::DeflectionContinuous: {
          if (budget.remaining > 0.0) {
            const double needed = (0.5 * quad(a.K_star, a.dx.value) -
                                   0.5 * st.d * st.d * quad(st.K_nominal, a.dx.value)) / dt;
            a.granted = draw_initial_energy(budget, std::max(0.0, needed - a.p_d), dt);
            p_budget += a.granted;
          }
          const double d_next =
              sc.method == PassivationMethod::DeflectionDiscrete
                  ? deflection_limit_step(st, a.K_star, a.dx, p_budget, dt, sc.epsilon)
                  : deflection_continuous_update(st, a.K_star, a.dx, p_budget, dt, sc.epsilon);
          a.p_a = deflection_active_power(st.d, st.K_nominal, d_next, a.K_star, a.dx, dt);
          st.d = d_next;
          st.K_nominal = a.K_star;
          a.K_eff = d_next * d_next * a.K_star;
          break;
        }
        case PassivationMethod::StiffnessChange: {
          if (budget.remaining > 0.0) {
            const double needed = 0.5 * quad(a.K_star - st.K_passivated, a.dx.value) / dt;
            a.granted = draw_initial_energy(budget, std::max(0.0, needed - a.p_d), dt);
            p_budget += a.granted;
          }
          const auto res = stiffness_limit_step_detailed(st, a.K_star, a.dx, p_budget, dt);
          a.p_a = stiffness_active_power(st.K_passivated, res.K_next, a.dx, dt);
          st.K_passivated = symmetric_part(res.K_next);
          st.K_nominal = a.K_star;
          st.d = res.d;
          a.K_eff = st.K_passivated;
          break;
        }
        case PassivationMethod::TankBaseline: {
          a.K_eff = tank_enabled ? a.K_star : Mat6::Zero();
          st.d = tank_enabled ? 1.0 : 0.0;
          st.K_nominal = a.K_star;
          st.K_passivated = a.K_eff;
          a.p_a = std::max(0.0, 0.5 * quad(a.K_eff - a.K_eff_prev, a.dx.value) / dt);
          tank_p_d += a.p_d;
          tank_p_required += a.p_a;
          break;
        }
      }
      granted_total += a.granted;

      a.w_curl = k_curl[i] * a.dx.value;
      if (sc.method == PassivationMethod::None) {
        st.d_curl = 1.0;
      } else {
        const auto curl = curl_passivation(k_curl[i], a.dx, a.dv, p_budget, a.p_a, sc.curl_allowance);
        st.d_curl = curl.d_curl;
        a.w_curl = curl.wrench.value;
      }

      // The damper acts on the deflection rate over the coming step,
      // b - T^T v', with v' the new end-effector twist; the plant solves for
      // it. Optionally the damping wrench is scaled like the stiffness.
      a.damp_map = a.T;
      if (sc.scale_damping_wrench && sc.arbitration != ArbitrationKind::None) a.damp_map = a.S * a.T;
      w_static += a.T * (a.K_eff * a.dx.value + a.w_curl) + a.damp_map * (st.K_d * a.st.twist.value);
      feedback += a.damp_map * st.K_d * a.T.transpose();
    }

    if (sc.method == PassivationMethod::TankBaseline) {
      tank = tank_step(tank, tank_p_d, tank_p_required, dt).tank;
    }

    // Storage with the stiffness chosen this tick; grants drawn this tick
    // pay for it.
    v_inp += granted_total * dt;
    const double v_kin = kinetic_energy(state.twist, plant.mass);
    double v_total = v_kin;
    std::vector<double> v_pot(n_att);
    for (std::size_t i = 0; i < n_att; ++i) {
      v_pot[i] = 0.5 * quad(att[i].K_eff, att[i].dx.value);
      v_total += v_pot[i];
    }

    // Trace row for this tick.
    const double vdot = n == 0 ? 0.0 : (v_total - v_total_prev) / dt;
    const double vdot_inp = n == 0 ? 0.0 : (v_inp - v_inp_prev) / dt;
    std::vector<double> row;
    row.reserve(trace.columns.size());
    row.push_back(t);
    std::vector<double> extra{tank.level, tank_enabled ? 1.0 : 0.0, budget.remaining};
    for (std::size_t i = 0; i < n_att; ++i) {
      const auto& a = att[i];
      for (int k = 0; k < 6; ++k) row.push_back(a.dx.value(k));
      row.push_back(a.st.d);
      row.push_back(a.st.d_curl);
      Vec6 kd;
      switch (sc.method) {
        case PassivationMethod::StiffnessChange: kd = diag(a.st.K_passivated); break;
        case PassivationMethod::TankBaseline: kd = diag(a.K_eff); break;
        default: kd = diag(a.K_star); break;
      }
      for (int k = 0; k < 6; ++k) row.push_back(kd(k));
      row.push_back(v_pot[i]);
      row.push_back(a.p_d);
      extra.push_back(a.p_a);
      extra.push_back(a.granted);
      extra.push_back(a.chart_ok ? 1.0 : 0.0);
      for (int k = 0; k < 6; ++k) extra.push_back(a.K_eff(k, k));
    }
    const auto& q = state.pose.orientation;
    for (double x : {state.pose.position.x(), state.pose.position.y(), state.pose.position.z(), q.w(), q.x(), q.y(),
                     q.z()}) {
      row.push_back(x);
    }
    for (int k = 0; k < 6; ++k) row.push_back(state.twist.value(k));
    row.push_back(v_kin);
    row.push_back(v_inp);
    row.push_back(v_total);
    row.push_back(vdot);
    row.push_back(vdot_inp);
    row.push_back(vdot > vdot_inp ? 1.0 : 0.0);
    trace.rows.push_back(std::move(row));
    trace.extra_rows.push_back(std::move(extra));
    v_total_prev = v_total;
    v_inp_prev = v_inp;

    if (n == n_steps) break;

    // Plant step, then the ports evaluated against the new velocity with the
    // wrenches that actually acted.
    const Vec6 w_ext = spatial_rotation(r_ee.transpose()) * sc.external_wrench.at(t);
    Vec6 w_env = w_ext;
    if (plant.wall) w_env += wall_wrench(state, *plant.wall).value;
    PlantState next;
    try {
      next = plant_step(state, plant, Wrench(w_static), Wrench(w_ext), feedback);
    } catch (const PlantFault& e) {
      throw SimulationAborted(std::string(e.what()) + " at step " + std::to_string(n), n, trace.rows.back());
    }
    const Vec6& v_next = next.twist.value;
    v_inp += v_next.dot(w_env) * dt;
    for (auto& a : att) {
      const Vec6 rate = a.st.twist.value - a.T.transpose() * v_next;
      const Vec6 w_damp_cart = a.damp_map * (a.st.K_d * rate);
      a.w_cart = a.T * (a.K_eff * a.dx.value + a.w_curl) + w_damp_cart;
      a.w_chart = a.T_inv * a.w_cart;
      v_inp += v_next.dot(a.w_cart) * dt;
      a.w_chart_prev = a.w_chart;
      a.dx_prev = a.dx;
      a.dv_prev = a.dv;
      a.K_eff_prev = a.K_eff;
      a.K_d_prev = a.st.K_d;
      a.has_prev = true;
    }
    state = next;
  }
  return trace;
}

double ledger_excess(const TraceTable& trace) {
  if (trace.rows.empty()) return 0.0;
  const auto vt = trace.column_index("V_total_J");
  const auto vi = trace.column_index("V_inp_J");
  const double v0 = trace.rows.front()[vt];
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : trace.rows) worst = std::max(worst, (r[vt] - v0) - r[vi]);
  return worst;
}

}  // namespace vipass
