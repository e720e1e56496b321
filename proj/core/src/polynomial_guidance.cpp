#include "ldg/polynomial_guidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ldg/errors.hpp"

namespace ldg {

Vec3 CubicLaw::accel(double t) const {
  const double s = t - t_start;
  return a0 + s * (c1 + s * (c2 + s * c3));
}

Vec3 CubicLaw::velocity(double t, const Vec3& v0) const {
  const double s = t - t_start;
  return v0 + s * (a0 + s * (c1 / 2.0 + s * (c2 / 3.0 + s * c3 / 4.0)));
}

Vec3 CubicLaw::position(double t, const Vec3& r0, const Vec3& v0) const {
  const double s = t - t_start;
  return r0 + s * (v0 + s * (a0 / 2.0 + s * (c1 / 6.0 + s * (c2 / 12.0 + s * c3 / 20.0))));
}

CubicLaw cubic_coefficients(const DescentBoundary& b, double t_start) {
  if (!(b.tf > 0.0) || !std::isfinite(b.tf)) throw DomainError("cubic_coefficients: tf must be positive");
  const double t = b.tf, t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const Vec3 d1 = b.af - b.a0;
  const Vec3 d2 = b.vf - b.v0 - b.a0 * t;
  const Vec3 d3 = b.rf - b.r0 - b.v0 * t - 0.5 * b.a0 * t2;
  CubicLaw law;
  law.a0 = b.a0;
  law.c1 = 3.0 / t * d1 - 24.0 / t2 * d2 + 60.0 / t3 * d3;
  law.c2 = -12.0 / t2 * d1 + 84.0 / t3 * d2 - 180.0 / t4 * d3;
  law.c3 = 10.0 / t3 * d1 - 60.0 / t4 * d2 + 120.0 / t5 * d3;
  law.tf = b.tf;
  law.t_start = t_start;
  return law;
}

GateTarget vertical_gate(double shift, double gate_altitude, double descent_speed, const MoonConstants& k) {
  const double theta = theta_from_downrange(shift, k);
  const Vec3 e_r(std::cos(theta), 0.0, std::sin(theta));
  GateTarget g;
  g.position = (k.r_moon + gate_altitude) * e_r;
  g.velocity = -descent_speed * e_r;
  g.accel = Vec3::Zero();
  return g;
}

ThrustTrace thrust_from_total_accel(const CubicLaw& law, const std::vector<CartesianState>& trace,
                                    const EngineModel& engine, const MoonConstants& k) {
  ThrustTrace out;
  out.commands.reserve(trace.size());
  for (const CartesianState& s : trace) {
    ThrustCommand cmd = command_from_total_accel(s, law.accel(s.t), k);
    if (cmd.t1 < engine.t1_min() || cmd.t1 > engine.t1_max()) {
      out.violations.push_back("t1 " + std::to_string(cmd.t1) + " N outside bounds at t = " + std::to_string(s.t));
    }
    out.commands.push_back(cmd);
  }
  return out;
}

CubicLaw plan_divert(const CartesianState& current, const Vec3& current_accel, const GateTarget& gate, double tf_div,
                     double shift_increment, double max_shift) {
  if (std::abs(shift_increment) > max_shift) {
    throw DomainError("plan_divert: shift " + std::to_string(shift_increment) + " m exceeds " +
                      std::to_string(max_shift) + " m");
  }
  DescentBoundary b;
  b.r0 = current.position;
  b.v0 = current.velocity;
  b.a0 = current_accel;
  b.rf = gate.position;
  b.vf = gate.velocity;
  b.af = gate.accel;
  b.tf = tf_div;
  return cubic_coefficients(b, current.t);
}

DescentMetrics measure(const Trajectory& traj) {
  DescentMetrics m;
  if (traj.empty()) return m;
  m.propellant = traj.front().state.m - traj.back().state.m;
  m.t1_min = std::numeric_limits<double>::infinity();
  m.t1_max = -m.t1_min;
  double t2_lo = std::numeric_limits<double>::infinity(), t2_hi = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const TrajectorySample& s = traj.samples[i];
    m.max_pitch_rate_dps = std::max(m.max_pitch_rate_dps, s.pitch_rate_dps);
    m.t1_min = std::min(m.t1_min, s.cmd.t1);
    m.t1_max = std::max(m.t1_max, s.cmd.t1);
    if (s.cmd.t2 > 0.0) {
      t2_lo = std::min(t2_lo, s.cmd.t2);
      t2_hi = std::max(t2_hi, s.cmd.t2);
    }
    if (i == 0) continue;
    const TrajectorySample& p = traj.samples[i - 1];
    const double dt = s.state.t - p.state.t;
    if (dt < 1e-6) continue;
    m.max_t1_rate = std::max(m.max_t1_rate, std::abs(s.cmd.t1 - p.cmd.t1) / dt);
    if (s.cmd.t2 > 0.0 && p.cmd.t2 > 0.0) {
      m.max_t2_rate = std::max(m.max_t2_rate, std::abs(s.cmd.t2 - p.cmd.t2) / dt);
      m.max_stack_rate = std::max(m.max_stack_rate, std::abs(s.cmd.total() - p.cmd.total()) / dt);
    }
  }
  if (t2_hi > 0.0) {
    m.t2_min = t2_lo;
    m.t2_max = t2_hi;
  }
  return m;
}

namespace {

PropagationResult fly_law(const CubicLaw& law, const CartesianState& from, double t_end, double step,
                          std::vector<EventSpec> events, const ThrustSplit& split, const EngineModel& engine,
                          const MoonConstants& k) {
  const double span = t_end - from.t;
  if (!(span > 0.0)) throw PhaseError("powered_descent", "no time left to reach the vertical gate");
  PropagationOptions opt;
  opt.step = step;
  opt.events = std::move(events);
  const AccelSteering steer = [&law](double t, const CartesianState&) { return law.accel(t); };
  return propagate_cartesian(from, steer, AccelMode::total, span, opt, engine, k, split);
}

}  // namespace

PoweredDescentResult fly_powered_descent(const PoweredDescentSpec& spec, const EngineModel& engine,
                                         const MoonConstants& k) {
  if (!(spec.tf > 0.0)) throw DomainError("fly_powered_descent: tf must be positive");
  PoweredDescentResult out;

  CartesianState cur = spherical_to_cartesian(spec.start);
  const LocalFrame f0 = local_frame(spec.start.phi, spec.start.theta);
  const Vec3 u0 = f0.to_inertial(spec.start_cmd.u.normalized());
  const double t_vga = spec.start.t + spec.tf;

  const GateTarget nominal_gate = vertical_gate(0.0, spec.vga_altitude, spec.descent_speed, k);
  CubicLaw law = plan_divert(cur, spec.start_cmd.total() / cur.m * u0 + gravity_accel(cur.position, k), nominal_gate,
                             spec.tf, 0.0, 0.0);
  law.t_start = cur.t;
  out.laws.push_back(law);

  // Centre engine lit: thrust shared by engine count until the low gate.
  TrajectorySample lga_sample;
  if (spec.start_cmd.t2 > 0.0 && altitude(spec.start, k) > spec.lga_altitude) {
    const double share = engine.outer_share();
    const ThrustSplit shared = [share](double, double total, const Vec3& u) {
      ThrustCommand c;
      c.t1 = share * total;
      c.t2 = total - c.t1;
      c.u = u;
      return c;
    };
    PropagationResult a = fly_law(law, cur, t_vga, spec.step, {EventSpec::altitude(spec.lga_altitude)}, shared,
                                  engine, k);
    if (!a.event) throw PhaseError("powered_descent", "low gate altitude not crossed before the vertical gate");
    out.trajectory.append(a.trajectory);
    cur = a.final_cartesian;
    lga_sample.state = a.final_state;
    lga_sample.cmd = a.final_cmd;
  } else {
    lga_sample.state = spec.start;
    lga_sample.cmd = spec.start_cmd;
    out.trajectory.samples.push_back(lga_sample);
  }
  lga_sample.altitude = altitude(lga_sample.state, k);
  lga_sample.downrange = downrange(lga_sample.state, k);
  lga_sample.pitch_deg = pitch_angle(lga_sample.cmd.u) * 180.0 / std::numbers::pi;
  out.lga = lga_sample;

  // Centre engine cut; the outer pair keeps its thrust.
  const double t1_lga = spec.start_cmd.t2 > 0.0 ? lga_sample.cmd.t1 : lga_sample.cmd.total();
  const Vec3 u_lga = local_frame(lga_sample.state.phi, lga_sample.state.theta).to_inertial(lga_sample.cmd.u);
  const double tf1 = spec.divert.tf_div.value_or(t_vga - cur.t);
  const double t_end1 = cur.t + tf1;
  const GateTarget gate1 = vertical_gate(spec.divert.hda1_shift, spec.vga_altitude, spec.descent_speed, k);
  law = plan_divert(cur, t1_lga / cur.m * u_lga + gravity_accel(cur.position, k), gate1, tf1,
                    spec.divert.hda1_shift, spec.hda1_max);
  out.laws.push_back(law);

  double t_end = t_end1;
  std::vector<EventSpec> events;
  const bool hda2_ahead = cartesian_to_spherical(cur).r - k.r_moon > spec.hda2_altitude;
  if (hda2_ahead) events.push_back(EventSpec::altitude(spec.hda2_altitude));
  PropagationResult b = fly_law(law, cur, t_end, spec.step, events, {}, engine, k);
  out.trajectory.append(b.trajectory);
  cur = b.final_cartesian;

  if (b.event) {
    TrajectorySample h;
    h.state = b.final_state;
    h.cmd = b.final_cmd;
    out.hda2 = h;
    if (spec.divert.hda2_shift != 0.0) {
      const GateTarget gate2 = vertical_gate(spec.divert.hda1_shift + spec.divert.hda2_shift, spec.vga_altitude,
                                             spec.descent_speed, k);
      law = plan_divert(cur, law.accel(cur.t), gate2, t_end - cur.t, spec.divert.hda2_shift, spec.hda2_max);
      out.laws.push_back(law);
    }
    PropagationResult c = fly_law(law, cur, t_end, spec.step, {}, {}, engine, k);
    out.trajectory.append(c.trajectory);
    cur = c.final_cartesian;
    out.vga = c.final_state;
    out.vga_cmd = c.final_cmd;
  } else {
    out.vga = b.final_state;
    out.vga_cmd = b.final_cmd;
  }

  out.trajectory.refresh_derived(k);
  out.metrics = measure(out.trajectory);
  return out;
}

bool within_limits(const DescentMetrics& m, const EngineModel& e, const DescentLimits& lim) {
  const double s = 1.0 + lim.tolerance;
  const double lo = 1.0 - lim.tolerance;
  bool ok = m.max_pitch_rate_dps <= lim.max_pitch_rate_dps * s && m.max_t1_rate <= e.t1_rate_max() * s &&
            m.t1_min >= e.t1_min() * lo && m.t1_max <= e.t1_max() * s;
  if (m.t2_max > 0.0) {
    ok = ok && m.max_t2_rate <= e.t2_rate_max() * s && m.max_stack_rate <= e.stack_rate_max() * s &&
         m.t2_min >= e.t2_min() * lo && m.t2_max <= e.t2_max() * s;
  }
  return ok;
}

std::vector<TofSweepRow> sweep_tof(const DescentFamily& family, const std::vector<double>& tf_grid,
                                   const EngineModel& engine, const MoonConstants& k, const DescentLimits& limits) {
  std::vector<TofSweepRow> rows;
  rows.reserve(tf_grid.size());
  for (double tf : tf_grid) {
    TofSweepRow row;
    row.tf = tf;
    try {
      const PoweredDescentResult r = fly_powered_descent(family(tf), engine, k);
      row.metrics = r.metrics;
      row.feasible = within_limits(r.metrics, engine, limits);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ldg
