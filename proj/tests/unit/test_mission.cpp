#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ldg/config.hpp"
#include "ldg/errors.hpp"
#include "ldg/mission.hpp"

using namespace ldg;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
const MissionConfig cfg;
const DivertScenario kNominal{"N", 0.0, 0.0};

const MissionResult& published() {
  static const MissionResult r = assemble(published_design(cfg.moon), kNominal, cfg);
  return r;
}

const MissionDesign& optimized_design() {
  static const MissionDesign d = load_design(std::string(LDG_DATA_DIR) + "/optimized_design.json");
  return d;
}

const MissionResult& optimized() {
  static const MissionResult r = assemble(optimized_design(), kNominal, cfg);
  return r;
}

bool within(double x, double want, double rel) { return std::abs(x - want) <= rel * std::abs(want); }

}  // namespace

TEST_CASE("published design reproduces the sub-optimal timeline") {
  const MissionResult& r = published();
  CHECK(std::abs(r.timeline.at("PGA").mass - 4072.8) < 5.0);
  CHECK(within(r.timeline.at("MECO").mass, 3879.1, 0.01));
  CHECK(std::abs(r.time_of_flight - 594.0) < 2.0);
  CHECK(within(r.propellant.total, 3120.9, 0.01));
  CHECK(within(r.propellant.delta_v, 1911.0, 0.01));
  CHECK(r.timeline.at("LGA").altitude == doctest::Approx(500.0).epsilon(1e-6));
  CHECK(r.timeline.at("VGA").altitude == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(std::abs(r.timeline.at("MECO").altitude) < 1e-5);
}

TEST_CASE("waypoints are ordered in time and the slew ends before the low gate") {
  const auto& p = published().timeline.points;
  REQUIRE(p.size() == 5);
  const char* names[] = {"MBB", "PGA", "LGA", "VGA", "MECO"};
  for (std::size_t i = 0; i < 5; ++i) CHECK(p[i].name == names[i]);
  for (std::size_t i = 1; i < 5; ++i) CHECK(p[i].t > p[i - 1].t);
  CHECK(published().timeline.slew_end > p[1].t);
  CHECK(published().timeline.slew_end < p[2].t);
}

TEST_CASE("propellant bookkeeping closes both ways") {
  for (const MissionResult* r : {&published(), &optimized()}) {
    const PropellantBreakdown& p = r->propellant;
    const double m0 = r->trajectory.front().state.m, mf = r->trajectory.back().state.m;
    CHECK(p.total == doctest::Approx(m0 - mf).epsilon(1e-6));
    CHECK(p.braking + p.pitch_up + p.powered_descent + p.vertical == doctest::Approx(p.total).epsilon(1e-6));
    CHECK(p.to_lga + p.lga_to_vga + p.vertical == doctest::Approx(p.total).epsilon(1e-6));
    CHECK(p.delta_v == doctest::Approx(cfg.engine.isp * cfg.moon.g0 * std::log(m0 / mf)).epsilon(1e-12));
  }
}

TEST_CASE("published design sits on the gate limits") {
  // rounded published values land within a fraction of a percent of the active limits
  const ConstraintAudit& a = published().audit;
  CHECK(within(a.find("lga_speed_mps")->observed, 30.0, 0.005));
  CHECK(within(a.find("lga_pitch_deg")->observed, 80.0, 0.005));
  CHECK(within(a.find("t1_rate_Nps")->observed, 400.0, 0.05));
  CHECK(a.find("pitch_rate_dps")->pass);
  CHECK(a.find("vga_pitch_error_deg")->pass);
}

TEST_CASE("optimized design passes every constraint") {
  const MissionResult& r = optimized();
  CHECK(r.audit.pass());
  CHECK(r.propellant.total <= 3140.0);
  CHECK(r.audit.penalty(1e3) == 0.0);
}

TEST_CASE("accepted trajectory respects pitch and throttle rates sample by sample") {
  const Trajectory& t = optimized().trajectory;
  const EngineModel& e = cfg.engine;
  const double slack = 1.0 + ConstraintAudit::kTolerance;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const TrajectorySample& a = t.samples[i - 1];
    const TrajectorySample& b = t.samples[i];
    CHECK(b.cmd.u.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.state.phi == 0.0);
    CHECK(b.pitch_rate_dps <= cfg.gates.max_pitch_rate_dps * slack);
    const double dt = b.state.t - a.state.t;
    if (dt < 1e-6) continue;
    CHECK(std::abs(b.cmd.t1 - a.cmd.t1) / dt <= e.t1_rate_max() * slack);
    if (a.cmd.t2 > 0.0 && b.cmd.t2 > 0.0) {
      CHECK(std::abs(b.cmd.t2 - a.cmd.t2) / dt <= e.t2_rate_max() * slack);
      CHECK(std::abs(b.cmd.total() - a.cmd.total()) / dt <= e.stack_rate_max() * slack);
    }
  }
}

TEST_CASE("divert matrix totals and penalties") {
  const auto rows = divert_matrix(published_design(cfg.moon), cfg);
  REQUIRE(rows.size() == 7);
  const auto& sub = suboptimal_references();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(rows[i].scenario.code);
    REQUIRE(rows[i].ok);
    CHECK(sub[i].code == rows[i].scenario.code);
    CHECK(within(rows[i].propellant.total, sub[i].total, 0.01));
    CHECK(rows[i].penalty_pct < 1.0);
    CHECK(rows[i].penalty == doctest::Approx(rows[i].propellant.total - rows[i].optimal_total));
  }
  CHECK(std::abs(rows[0].penalty - 15.1) < 0.35 * 15.1);
}

TEST_CASE("scenario shifts move the touchdown point") {
  const MissionResult r = assemble(published_design(cfg.moon), DivertScenario{"FB", -100.0, 20.0}, cfg);
  const SphericalState& touchdown = r.trajectory.back().state;
  CHECK(downrange(touchdown, cfg.moon) == doctest::Approx(-80.0).epsilon(1e-6));
}

TEST_CASE("closed-loop replay without perturbation matches open loop") {
  const ReplayResult r = replay_closed_loop(published_design(cfg.moon), 0.0, cfg);
  CHECK(within(r.mission.propellant.total, published().propellant.total, 1e-6));
  CHECK(within(r.mission.timeline.at("MECO").t, published().timeline.at("MECO").t, 1e-6));
  CHECK(r.pga_position_error < 1e-2);
}

TEST_CASE("closed-loop replay absorbs an uprange start") {
  const ReplayResult r = replay_closed_loop(published_design(cfg.moon), -0.02 * kDeg, cfg);
  CHECK(r.pga_position_error < 10.0);
  CHECK(r.update_thrust.front() < cfg.engine.total_max());
  const double t_end = r.mission.timeline.at("PGA").t;
  for (double t : r.update_times) CHECK(t_end - t >= cfg.replay.freeze_time - 1e-9);
}

TEST_CASE("closed-loop replay reports starts that need more than full thrust") {
  CHECK_THROWS_AS(replay_closed_loop(published_design(cfg.moon), 0.05 * kDeg, cfg), UnreachableError);
}

TEST_CASE("reference fixtures") {
  CHECK(optimal_references().size() == 7);
  CHECK(optimal_reference("N").total < suboptimal_references()[0].total);
  CHECK(optimal_timeline().size() == 5);
  CHECK_THROWS(optimal_reference("X"));
}
