#include "ldg/mission.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "ldg/errors.hpp"
#include "ldg/vertical_descent.hpp"

namespace ldg {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

template <typename F>
auto in_phase(const std::string& phase, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PhaseError&) {
    throw;
  } catch (const Error& e) {
    throw PhaseError(phase, e.what());
  }
}

TrajectorySample sample_of(const SphericalState& s, const ThrustCommand& cmd, const MoonConstants& k) {
  TrajectorySample out;
  out.state = s;
  out.cmd = cmd;
  out.altitude = altitude(s, k);
  out.downrange = downrange(s, k);
  out.pitch_deg = pitch_angle(cmd.u) / kDeg;
  return out;
}

PropagationResult fly_braking(const BilinearLaw& law, const SphericalState& from, double span, double step,
                              const EngineModel& engine, const MoonConstants& k) {
  const Steering steer = [&law, &engine](double t, const SphericalState&) { return braking_command(law, t, engine); };
  PropagationOptions opt;
  opt.step = step;
  return propagate(from, steer, span, opt, engine, k);
}

struct Front {
  PitchUpPlan plan;
  PitchUpFlight slew;
  PoweredDescentSpec spec;
};

Front fly_front(const SphericalState& pga, const ThrustCommand& pga_cmd, const MissionDesign& d,
                const DivertScenario& sc, const MissionConfig& cfg) {
  const GateParameters& g = cfg.gates;
  Front f;
  f.plan = in_phase("pitch_up", [&] {
    return plan_pitch_up(pga, pga_cmd, g.pitch_up_target_deg * kDeg, g.max_pitch_rate_dps * kDeg, cfg.engine);
  });
  PropagationOptions slew_opt;
  slew_opt.step = cfg.step;
  slew_opt.events = {EventSpec::altitude(g.lga_altitude)};
  f.slew = in_phase("pitch_up", [&] { return fly_pitch_up(f.plan, pga, cfg.engine, cfg.moon, slew_opt); });
  if (f.slew.flight.event) throw PhaseError("pitch_up", "low gate reached before the end of the slew");

  PoweredDescentSpec& pd = f.spec;
  pd.start = f.slew.flight.final_state;
  pd.start_cmd = f.slew.flight.final_cmd;
  pd.tf = d.dt_powered;
  pd.lga_altitude = g.lga_altitude;
  pd.hda2_altitude = g.hda2_altitude;
  pd.hda1_max = g.hda1_max_divert;
  pd.hda2_max = g.hda2_max_divert;
  pd.vga_altitude = g.vga_altitude;
  pd.descent_speed = g.descent_speed;
  pd.divert.hda1_shift = sc.hda1_shift;
  pd.divert.hda2_shift = sc.hda2_shift;
  if (auto it = d.dt_div.find(sc.code); it != d.dt_div.end()) pd.divert.tf_div = it->second;
  pd.step = cfg.step;
  return f;
}

/// Everything after the braking burn.
void finish_from_pga(MissionResult& res, Trajectory braking_traj, const SphericalState& pga,
                     const ThrustCommand& pga_cmd, const MissionDesign& d, const DivertScenario& sc,
                     const MissionConfig& cfg) {
  const MoonConstants& k = cfg.moon;
  const EngineModel& engine = cfg.engine;
  const GateParameters& g = cfg.gates;

  const Front front = fly_front(pga, pga_cmd, d, sc, cfg);
  res.pitch_up = front.plan;
  const PitchUpFlight& slew = front.slew;
  const PoweredDescentSpec& pd = front.spec;
  const PoweredDescentResult descent = in_phase("powered_descent", [&] { return fly_powered_descent(pd, engine, k); });
  res.descent_laws = descent.laws;

  const VerticalDescentResult vertical = in_phase("vertical_descent", [&] {
    return fly_vertical(descent.vga, g.descent_speed, pitch_angle(descent.vga_cmd.u) / kDeg, engine, k, cfg.step);
  });

  Trajectory& traj = res.trajectory;
  traj = std::move(braking_traj);
  traj.append(slew.flight.trajectory);
  traj.append(descent.trajectory);
  traj.append(vertical.flight.trajectory);
  traj.refresh_derived(k);

  const TrajectorySample lga = sample_of(descent.lga->state, descent.lga->cmd, k);
  const TrajectorySample vga = sample_of(descent.vga, descent.vga_cmd, k);
  const SphericalState& meco = vertical.flight.final_state;

  WaypointTimeline& tl = res.timeline;
  tl.points = {make_waypoint("MBB", traj.front()), make_waypoint("PGA", sample_of(pga, pga_cmd, k)),
               make_waypoint("LGA", lga), make_waypoint("VGA", vga),
               make_waypoint("MECO", sample_of(meco, vertical.flight.final_cmd, k))};
  tl.slew_end = slew.flight.final_state.t;

  const DescentMetrics m = measure(traj);
  ConstraintAudit& a = res.audit;
  a.items.clear();
  a.add("lga_altitude_error_m", std::abs(lga.altitude - g.lga_altitude), 0.5, true);
  a.add("lga_speed_mps", std::hypot(lga.state.v_r, horizontal_speed(lga.state)), g.lga_max_speed, true);
  a.add("lga_pitch_deg", lga.pitch_deg, g.lga_min_pitch_deg, false);
  a.add("pitch_rate_dps", m.max_pitch_rate_dps, g.max_pitch_rate_dps, true);
  a.add("t1_rate_Nps", m.max_t1_rate, engine.t1_rate_max(), true);
  a.add("t2_rate_Nps", m.max_t2_rate, engine.t2_rate_max(), true);
  a.add("stack_rate_Nps", m.max_stack_rate, engine.stack_rate_max(), true);
  a.add("t1_min_N", m.t1_min, engine.t1_min(), false);
  a.add("t1_max_N", m.t1_max, engine.t1_max(), true);
  if (m.t2_max > 0.0) {
    a.add("t2_min_N", m.t2_min, engine.t2_min(), false);
    a.add("t2_max_N", m.t2_max, engine.t2_max(), true);
  }
  a.add("vga_pitch_error_deg", std::abs(vga.pitch_deg - g.vertical_pitch_deg), 1.0, true);

  PropellantBreakdown& p = res.propellant;
  const double m0 = traj.front().state.m;
  p.braking = m0 - pga.m;
  p.pitch_up = pga.m - slew.flight.final_state.m;
  p.powered_descent = slew.flight.final_state.m - descent.vga.m;
  p.vertical = vertical.propellant;
  p.to_lga = m0 - lga.state.m;
  p.lga_to_vga = lga.state.m - descent.vga.m;
  p.total = m0 - meco.m;
  p.delta_v = engine.isp * k.g0 * std::log(m0 / meco.m);
  res.time_of_flight = meco.t - traj.front().state.t;
}

BrakingSolution solve_nominal_braking(const MissionDesign& d, const MissionConfig& cfg,
                                      const std::optional<BilinearLaw>& guess) {
  BrakingTarget target;
  target.x_f = pga_target(d);
  target.z0 = mbb_state(cfg);
  BrakingOptions opt;
  opt.step = cfg.step;
  return in_phase("braking_burn", [&] { return solve_braking_5(target, cfg.engine, cfg.moon, opt, guess); });
}

}  // namespace

Waypoint make_waypoint(const std::string& name, const TrajectorySample& s) {
  Waypoint w;
  w.name = name;
  w.t = s.state.t;
  w.altitude = s.altitude;
  w.downrange = s.downrange;
  w.v_vertical = s.state.v_r;
  w.v_horizontal = horizontal_speed(s.state);
  w.pitch_deg = s.pitch_deg;
  w.mass = s.state.m;
  return w;
}

const Waypoint& WaypointTimeline::at(const std::string& name) const {
  for (const Waypoint& w : points) {
    if (w.name == name) return w;
  }
  throw DomainError("no waypoint named " + name);
}

void ConstraintAudit::add(const std::string& name, double observed, double limit, bool upper) {
  AuditItem it;
  it.name = name;
  it.observed = observed;
  it.limit = limit;
  it.upper = upper;
  const double slack = kTolerance * std::max(std::abs(limit), 1.0);
  it.margin = (upper ? limit - observed : observed - limit) + slack;
  it.pass = it.margin >= 0.0;
  items.push_back(it);
}

bool ConstraintAudit::pass() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.pass; });
}

double ConstraintAudit::penalty(double weight) const {
  double sum = 0.0;
  for (const AuditItem& i : items) {
    if (i.pass) continue;
    const double v = -i.margin / std::max(std::abs(i.limit), 1.0);
    sum += weight * v * v;
  }
  return sum;
}

const AuditItem* ConstraintAudit::find(const std::string& name) const {
  for (const AuditItem& i : items) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

SphericalState mbb_state(const MissionConfig& cfg, double theta0) {
  SphericalState s = periselene_state(cfg.gates.periselene_altitude, cfg.gates.aposelene_altitude,
                                      cfg.gates.initial_mass, cfg.moon);
  s.t = 0.0;
  s.theta = theta0;
  return s;
}

SphericalState pga_target(const MissionDesign& d) {
  SphericalState s;
  s.r = d.pga_r;
  s.phi = 0.0;
  s.theta = d.pga_theta;
  s.v_r = d.pga_v_r;
  s.v_phi = 0.0;
  s.v_theta = d.pga_v_theta;
  return s;
}

MissionResult assemble(const MissionDesign& d, const DivertScenario& sc, const MissionConfig& cfg,
                       const AssembleOptions& options) {
  if (std::abs(sc.hda1_shift) > cfg.gates.hda1_max_divert || std::abs(sc.hda2_shift) > cfg.gates.hda2_max_divert) {
    throw DomainError("scenario " + sc.code + " diverts beyond the gate limits");
  }
  if (!(d.dt_powered > 0.0)) throw DomainError("design powered-descent time must be positive");
  MissionResult res;
  res.braking = solve_nominal_braking(d, cfg, options.braking_guess);
  const BilinearLaw& law = res.braking.law;
  const PropagationResult bb =
      in_phase("braking_burn", [&] { return fly_braking(law, res.braking.initial, law.dt, cfg.step, cfg.engine, cfg.moon); });
  finish_from_pga(res, bb.trajectory, bb.final_state, bb.final_cmd, d, sc, cfg);
  return res;
}

PoweredDescentSpec powered_descent_spec(const MissionDesign& d, const DivertScenario& sc, const MissionConfig& cfg,
                                        const AssembleOptions& options) {
  const BrakingSolution sol = solve_nominal_braking(d, cfg, options.braking_guess);
  PropagationOptions opt;
  opt.step = cfg.step;
  opt.record = false;
  const Steering steer = [&](double t, const SphericalState&) { return braking_command(sol.law, t, cfg.engine); };
  const PropagationResult bb =
      in_phase("braking_burn", [&] { return propagate(sol.initial, steer, sol.law.dt, opt, cfg.engine, cfg.moon); });
  return fly_front(bb.final_state, bb.final_cmd, d, sc, cfg).spec;
}

const std::vector<OptimalReference>& optimal_references() {
  static const std::vector<OptimalReference> rows = {
      {"N", 584.4, 2979.3, 97.1, 29.4, 3105.8, 1898.4},  {"F", 585.2, 2979.3, 99.9, 29.4, 3108.7, 1900.8},
      {"FF", 585.8, 2979.3, 101.4, 29.4, 3110.1, 1902.0}, {"FB", 585.0, 2979.3, 99.1, 29.4, 3107.8, 1900.1},
      {"B", 584.1, 2979.3, 97.8, 29.4, 3106.6, 1899.1},  {"BF", 584.1, 2979.3, 97.7, 29.4, 3106.4, 1898.9},
      {"BB", 584.4, 2979.3, 98.8, 29.4, 3107.5, 1899.8},
  };
  return rows;
}

const std::vector<OptimalReference>& suboptimal_references() {
  static const std::vector<OptimalReference> rows = {
      {"N", 594.0, 2972.2, 119.4, 29.3, 3120.9, 1911.0},  {"F", 595.9, 2972.2, 123.5, 29.3, 3125.1, 1914.5},
      {"FF", 598.9, 2972.2, 129.2, 29.2, 3130.7, 1919.2}, {"FB", 595.9, 2972.2, 123.8, 29.3, 3125.4, 1914.8},
      {"B", 595.9, 2972.2, 124.0, 29.3, 3125.5, 1914.8},  {"BF", 595.9, 2972.2, 123.9, 29.3, 3125.4, 1914.8},
      {"BB", 595.9, 2972.2, 124.5, 29.3, 3126.0, 1915.3},
  };
  return rows;
}

const OptimalReference& optimal_reference(const std::string& code) {
  for (const OptimalReference& r : optimal_references()) {
    if (r.code == code) return r;
  }
  throw DomainError("no optimal reference for scenario " + code);
}

const std::vector<Waypoint>& optimal_timeline() {
  static const std::vector<Waypoint> rows = {
      {"MBB", 0.0, 30000.0, 472230.0, 0.0, 1681.6, 0.0, 7000.0},
      {"PGA", 525.1, 920.0, 497.1, -43.2, 42.1, 33.5, 4079.4},
      {"LGA", 536.7, 500.0, 214.7, -26.8, 13.4, 80.0, 4020.7},
      {"VGA", 569.4, 30.0, 0.0, -2.0, 0.0, 90.0, 3923.6},
      {"MECO", 584.4, 0.0, 0.0, -2.0, 0.0, 90.0, 3894.2},
  };
  return rows;
}

std::vector<ScenarioRow> divert_matrix(const MissionDesign& design, const MissionConfig& cfg) {
  std::vector<ScenarioRow> rows;
  AssembleOptions opt;
  for (const DivertScenario& sc : cfg.scenarios) {
    ScenarioRow row;
    row.scenario = sc;
    try {
      const MissionResult r = assemble(design, sc, cfg, opt);
      opt.braking_guess = r.braking.law;
      row.ok = true;
      row.propellant = r.propellant;
      row.time_of_flight = r.time_of_flight;
      row.audit_pass = r.audit.pass();
      row.optimal_total = optimal_reference(sc.code).total;
      row.penalty = r.propellant.total - row.optimal_total;
      row.penalty_pct = 100.0 * row.penalty / row.optimal_total;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

ReplayResult replay_closed_loop(const MissionDesign& d, double theta_offset, const MissionConfig& cfg,
                                const DivertScenario& sc) {
  if (!(cfg.replay.gnc_period > 0.0)) throw DomainError("replay: GNC period must be positive");
  ReplayResult out;
  const BrakingSolution nominal = solve_nominal_braking(d, cfg, std::nullopt);
  const SphericalState target = pga_target(d);
  BrakingOptions opt;
  opt.step = cfg.step;

  SphericalState x = nominal.initial;
  x.theta += theta_offset;
  BilinearLaw law = solve_braking_6(x, target, cfg.engine, cfg.moon, opt, nominal.law).law;
  out.update_times.push_back(x.t);
  out.update_thrust.push_back(law.thrust);
  out.freeze_time = x.t;

  Trajectory traj;
  ThrustCommand cmd = braking_command(law, x.t, cfg.engine);
  while (true) {
    const double ttg = law.t_end() - x.t;
    if (ttg <= 1e-9) break;
    const double span = ttg < cfg.replay.freeze_time ? ttg : std::min(cfg.replay.gnc_period, ttg);
    const PropagationResult seg =
        in_phase("braking_burn", [&] { return fly_braking(law, x, span, cfg.step, cfg.engine, cfg.moon); });
    traj.append(seg.trajectory);
    x = seg.final_state;
    cmd = seg.final_cmd;
    if (law.t_end() - x.t < cfg.replay.freeze_time) continue;
    try {
      law = solve_braking_6(x, target, cfg.engine, cfg.moon, opt, law).law;
      out.update_times.push_back(x.t);
      out.update_thrust.push_back(law.thrust);
      out.freeze_time = x.t;
    } catch (const Error&) {
      // keep flying the last valid solution
    }
  }

  const CartesianState reached = spherical_to_cartesian(x);
  SphericalState aim = target;
  aim.m = x.m;
  const CartesianState wanted = spherical_to_cartesian(aim);
  out.pga_position_error = (reached.position - wanted.position).norm();
  out.pga_velocity_error = (reached.velocity - wanted.velocity).norm();

  out.mission.braking = nominal;
  out.mission.braking.law = law;
  finish_from_pga(out.mission, traj, x, cmd, d, sc, cfg);
  return out;
}

}  // namespace ldg
