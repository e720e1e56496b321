#include "ldg/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <nlohmann/json.hpp>

namespace ldg {

using json = nlohmann::ordered_json;

namespace {

double round4(double x) {
  const double r = std::round(x * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void json_section(std::ostream& os, const json& j) { os << "\n--- json ---\n" << j.dump(2) << "\n"; }

json waypoint_json(const Waypoint& w) {
  return {{"name", w.name},
          {"t_s", round4(w.t)},
          {"alt_m", round4(w.altitude)},
          {"downrange_m", round4(w.downrange)},
          {"v_vertical_mps", round4(w.v_vertical)},
          {"v_horizontal_mps", round4(w.v_horizontal)},
          {"pitch_deg", round4(w.pitch_deg)},
          {"m_kg", round4(w.mass)}};
}

json propellant_json(const PropellantBreakdown& p) {
  return {{"braking_kg", round4(p.braking)},
          {"pitch_up_kg", round4(p.pitch_up)},
          {"powered_descent_kg", round4(p.powered_descent)},
          {"vertical_descent_kg", round4(p.vertical)},
          {"braking_and_pitch_up_kg", round4(p.braking_and_pitch_up())},
          {"mbb_to_lga_kg", round4(p.to_lga)},
          {"lga_to_vga_kg", round4(p.lga_to_vga)},
          {"total_kg", round4(p.total)},
          {"delta_v_mps", round4(p.delta_v)}};
}

json audit_json(const ConstraintAudit& a) {
  json items = json::array();
  for (const AuditItem& i : a.items) {
    items.push_back({{"name", i.name},
                     {"observed", round4(i.observed)},
                     {"limit", round4(i.limit)},
                     {"kind", i.upper ? "max" : "min"},
                     {"margin", round4(i.margin)},
                     {"pass", i.pass}});
  }
  return {{"pass", a.pass()}, {"items", items}};
}

}  // namespace

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", round4(x));
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << "\n";
  for (const TrajectorySample& s : traj.samples) {
    const SphericalState& x = s.state;
    os << fixed4(x.t) << ',' << fixed4(x.r) << ',' << fixed4(x.phi) << ',' << fixed4(x.theta) << ','
       << fixed4(x.v_r) << ',' << fixed4(x.v_phi) << ',' << fixed4(x.v_theta) << ',' << fixed4(x.m) << ','
       << fixed4(s.altitude) << ',' << fixed4(s.downrange) << ',' << fixed4(s.pitch_deg) << ','
       << fixed4(s.pitch_rate_dps) << ',' << fixed4(s.cmd.t1) << ',' << fixed4(s.cmd.t2) << "\n";
  }
}

void write_tof_sweep_csv(std::ostream& os, const std::vector<TofSweepRow>& rows) {
  os << "tf_s,prop_kg,max_pitch_rate_dps,max_throttle_rate_Nps,t1_min_N,t1_max_N,feasible\n";
  for (const TofSweepRow& r : rows) {
    if (!r.error.empty()) {
      os << fixed4(r.tf) << ",,,,,,0\n";
      continue;
    }
    const DescentMetrics& m = r.metrics;
    os << fixed4(r.tf) << ',' << fixed4(m.propellant) << ',' << fixed4(m.max_pitch_rate_dps) << ','
       << fixed4(m.max_t1_rate) << ',' << fixed4(m.t1_min) << ',' << fixed4(m.t1_max) << ',' << (r.feasible ? 1 : 0)
       << "\n";
  }
}

void write_thrust_sweep_csv(std::ostream& os, const std::vector<ThrustSweepPoint>& rows) {
  os << "thrust_N,theta0_deg,dt_s,iterations\n";
  for (const ThrustSweepPoint& p : rows) {
    if (!p.converged) {
      os << fixed4(p.thrust) << ",,," << p.iterations << "\n";
      continue;
    }
    os << fixed4(p.thrust) << ',' << fixed4(p.theta0 * 180.0 / std::numbers::pi) << ',' << fixed4(p.dt) << ','
       << p.iterations << "\n";
  }
}

void write_history_csv(std::ostream& os, const std::vector<GenerationRecord>& history) {
  os << "generation,best_fitness,best_propellant,penalty\n";
  for (const GenerationRecord& g : history) {
    os << g.generation << ',' << fixed4(g.best_fitness) << ',' << fixed4(g.best_propellant) << ','
       << fixed4(g.penalty) << "\n";
  }
}

void write_mission_report(std::ostream& os, const MissionResult& r, const DivertScenario& sc) {
  os << "scenario " << sc.code << "  hda1 " << fixed4(sc.hda1_shift) << " m  hda2 " << fixed4(sc.hda2_shift)
     << " m\n\n";
  os << "waypoint        t_s      alt_m   downrange_m    vvert_mps    vhor_mps   pitch_deg        m_kg\n";
  for (const Waypoint& w : r.timeline.points) {
    os << pad(w.name, 8) << pad(fixed4(w.t), 11) << pad(fixed4(w.altitude), 11) << pad(fixed4(w.downrange), 14)
       << pad(fixed4(w.v_vertical), 13) << pad(fixed4(w.v_horizontal), 12) << pad(fixed4(w.pitch_deg), 12)
       << pad(fixed4(w.mass), 12) << "\n";
  }
  os << "slew end " << fixed4(r.timeline.slew_end) << " s\n\n";
  const PropellantBreakdown& p = r.propellant;
  os << "propellant  braking " << fixed4(p.braking) << "  pitch-up " << fixed4(p.pitch_up) << "  powered "
     << fixed4(p.powered_descent) << "  vertical " << fixed4(p.vertical) << "  total " << fixed4(p.total)
     << " kg\n";
  os << "            to LGA " << fixed4(p.to_lga) << "  LGA to VGA " << fixed4(p.lga_to_vga) << " kg\n";
  os << "delta-v " << fixed4(p.delta_v) << " m/s  time of flight " << fixed4(r.time_of_flight) << " s\n\n";
  os << "constraint                 observed        limit       margin  status\n";
  for (const AuditItem& i : r.audit.items) {
    os << i.name << std::string(i.name.size() < 22 ? 22 - i.name.size() : 1, ' ') << pad(fixed4(i.observed), 13)
       << pad((i.upper ? "<= " : ">= ") + fixed4(i.limit), 13) << pad(fixed4(i.margin), 13)
       << (i.pass ? "  pass" : "  FAIL") << "\n";
  }
  os << "audit " << (r.audit.pass() ? "pass" : "FAIL") << "\n";

  json j;
  j["scenario"] = {{"code", sc.code}, {"hda1_shift_m", round4(sc.hda1_shift)}, {"hda2_shift_m", round4(sc.hda2_shift)}};
  json wps = json::array();
  for (const Waypoint& w : r.timeline.points) wps.push_back(waypoint_json(w));
  j["timeline"] = wps;
  j["slew_end_s"] = round4(r.timeline.slew_end);
  j["time_of_flight_s"] = round4(r.time_of_flight);
  j["propellant"] = propellant_json(p);
  j["audit"] = audit_json(r.audit);
  json_section(os, j);
}

void write_divert_matrix_report(std::ostream& os, const std::vector<ScenarioRow>& rows) {
  os << "case   hda1_m   hda2_m      tof_s  brake+pu_kg  powered_kg  vertical_kg     total_kg     dv_mps"
        "   penalty_kg  penalty_pct  audit\n";
  json arr = json::array();
  for (const ScenarioRow& r : rows) {
    if (!r.ok) {
      os << pad(r.scenario.code, 4) << "  failed: " << r.error << "\n";
      arr.push_back({{"code", r.scenario.code}, {"ok", false}, {"error", r.error}});
      continue;
    }
    const PropellantBreakdown& p = r.propellant;
    os << pad(r.scenario.code, 4) << pad(fixed4(r.scenario.hda1_shift), 10) << pad(fixed4(r.scenario.hda2_shift), 9)
       << pad(fixed4(r.time_of_flight), 11) << pad(fixed4(p.braking_and_pitch_up()), 13)
       << pad(fixed4(p.powered_descent), 12) << pad(fixed4(p.vertical), 13) << pad(fixed4(p.total), 13)
       << pad(fixed4(p.delta_v), 11) << pad(fixed4(r.penalty), 13) << pad(fixed4(r.penalty_pct), 13)
       << (r.audit_pass ? "   pass" : "   FAIL") << "\n";
    arr.push_back({{"code", r.scenario.code},
                   {"ok", true},
                   {"hda1_shift_m", round4(r.scenario.hda1_shift)},
                   {"hda2_shift_m", round4(r.scenario.hda2_shift)},
                   {"time_of_flight_s", round4(r.time_of_flight)},
                   {"propellant", propellant_json(p)},
                   {"optimal_total_kg", round4(r.optimal_total)},
                   {"penalty_kg", round4(r.penalty)},
                   {"penalty_pct", round4(r.penalty_pct)},
                   {"audit_pass", r.audit_pass}});
  }
  json_section(os, json{{"scenarios", arr}});
}

void write_design_report(std::ostream& os, const DeResult& r, const std::vector<DivertTuning>& tuning) {
  const MissionDesign& d = r.best;
  os << "best design  pga_r " << fixed4(d.pga_r) << " m  pga_theta " << fixed4(d.pga_theta * 180.0 / std::numbers::pi)
     << " deg  v_r " << fixed4(d.pga_v_r) << " m/s  v_theta " << fixed4(d.pga_v_theta) << " m/s  dt_powered "
     << fixed4(d.dt_powered) << " s\n";
  os << "fitness " << fixed4(r.best_eval.fitness) << "  propellant " << fixed4(r.best_eval.propellant) << " kg  penalty "
     << fixed4(r.best_eval.penalty) << "  evaluations " << r.evaluations << "\n";
  for (const DivertTuning& t : tuning) {
    os << "divert " << t.code << "  dt_div " << fixed4(t.dt_div) << " s  (remaining " << fixed4(t.nominal_remaining)
       << " s)" << (t.feasible ? "" : "  infeasible: " + t.tightest) << "\n";
  }
  json div = json::object();
  for (const auto& [code, t] : d.dt_div) div[code] = round4(t);
  json_section(os, json{{"fitness", round4(r.best_eval.fitness)},
                        {"propellant_kg", round4(r.best_eval.propellant)},
                        {"penalty", round4(r.best_eval.penalty)},
                        {"evaluations", r.evaluations},
                        {"feasible", r.feasible},
                        {"dt_powered_s", round4(d.dt_powered)},
                        {"dt_div_s", div}});
}

void write_peg_report(std::ostream& os, const FlatPegProblem& p, const FlatPegSolution& s, const PmpReport& pmp) {
  os << "flat PEG  thrust " << fixed4(p.thrust) << " N  m0 " << fixed4(p.m0) << " kg  g " << fixed4(p.g.z())
     << " m/s^2\n";
  os << "tf " << fixed4(s.tf) << " s  iterations " << s.report.iterations << "  residual " << s.residual_norm << "\n";
  os << "b " << fixed4(s.b.x()) << ' ' << fixed4(s.b.y()) << ' ' << fixed4(s.b.z()) << "   c " << fixed4(s.c.x())
     << ' ' << fixed4(s.c.y()) << ' ' << fixed4(s.c.z()) << "\n";
  os << "PMP checks " << pmp.passed << "/" << pmp.checks << "\n\n";
  os << "      t_s     ux       uy       uz\n";
  for (int i = 0; i <= 10; ++i) {
    const double t = s.tf * i / 10.0;
    const Vec3 u = s.direction(t);
    os << pad(fixed4(t), 9) << pad(fixed4(u.x()), 9) << pad(fixed4(u.y()), 9) << pad(fixed4(u.z()), 9) << "\n";
  }
  json_section(os, json{{"tf_s", round4(s.tf)},
                        {"b", {round4(s.b.x()), round4(s.b.y()), round4(s.b.z())}},
                        {"c", {round4(s.c.x()), round4(s.c.y()), round4(s.c.z())}},
                        {"iterations", s.report.iterations},
                        {"pmp_passed", pmp.passed},
                        {"pmp_checks", pmp.checks}});
}

}  // namespace ldg
