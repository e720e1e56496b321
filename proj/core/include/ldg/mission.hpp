// End-to-end descent assembly, constraint audit and divert test matrix.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldg/braking_burn.hpp"
#include "ldg/config.hpp"
#include "ldg/pitch_up.hpp"
#include "ldg/polynomial_guidance.hpp"
#include "ldg/propagator.hpp"

namespace ldg {

struct Waypoint {
  std::string name;
  double t = 0.0;
  double altitude = 0.0;
  double downrange = 0.0;
  double v_vertical = 0.0;
  double v_horizontal = 0.0;
  double pitch_deg = 0.0;
  double mass = 0.0;
};

Waypoint make_waypoint(const std::string& name, const TrajectorySample& s);

struct WaypointTimeline {
  std::vector<Waypoint> points;  ///< MBB, PGA, LGA, VGA, MECO
  double slew_end = 0.0;         ///< end of the pitch-up attitude slew [s]

  const Waypoint& at(const std::string& name) const;
};

struct AuditItem {
  std::string name;
  double observed = 0.0;
  double limit = 0.0;
  bool upper = true;     ///< observed must not exceed limit; otherwise must not fall below
  double margin = 0.0;   ///< >= 0 when satisfied
  bool pass = true;
};

struct ConstraintAudit {
  std::vector<AuditItem> items;
  /// Relative slack granted to every limit.
  static constexpr double kTolerance = 1e-6;

  void add(const std::string& name, double observed, double limit, bool upper);
  bool pass() const;
  /// Sum over failed items of weight * (violation / |limit|)^2.
  double penalty(double weight) const;
  const AuditItem* find(const std::string& name) const;
};

struct PropellantBreakdown {
  double braking = 0.0;          ///< MBB to PGA
  double pitch_up = 0.0;         ///< PGA to end of slew
  double powered_descent = 0.0;  ///< end of slew to VGA
  double vertical = 0.0;         ///< VGA to MECO
  double to_lga = 0.0;           ///< MBB to LGA
  double lga_to_vga = 0.0;
  double total = 0.0;
  double delta_v = 0.0;          ///< Isp g0 ln(m0 / m_MECO)

  double braking_and_pitch_up() const { return braking + pitch_up; }
};

struct AssembleOptions {
  std::optional<BilinearLaw> braking_guess;
};

struct MissionResult {
  Trajectory trajectory;
  WaypointTimeline timeline;
  ConstraintAudit audit;
  PropellantBreakdown propellant;
  BrakingSolution braking;
  PitchUpPlan pitch_up;
  std::vector<CubicLaw> descent_laws;
  double time_of_flight = 0.0;
};

/// Initial state on the orbit periselene, at the given along-track angle.
SphericalState mbb_state(const MissionConfig& cfg, double theta0 = 0.0);
/// Target PGA state of a design (mass not set).
SphericalState pga_target(const MissionDesign& d);

/// Flies the braking burn and the pitch-up of a design and returns the
/// powered-descent problem that follows, with the scenario diverts applied.
PoweredDescentSpec powered_descent_spec(const MissionDesign& design, const DivertScenario& scenario,
                                        const MissionConfig& cfg, const AssembleOptions& options = {});

/// Chains braking burn, pitch-up, powered descent with diverts and vertical
/// descent.  Phase failures are rethrown as PhaseError naming the phase;
/// constraint violations only show in the audit.
MissionResult assemble(const MissionDesign& design, const DivertScenario& scenario, const MissionConfig& cfg,
                       const AssembleOptions& options = {});

/// Published fuel-optimal propellant per scenario, for penalty reporting.
struct OptimalReference {
  std::string code;
  double time_of_flight = 0.0;
  double braking_and_pitch_up = 0.0;
  double powered_descent = 0.0;
  double vertical = 0.0;
  double total = 0.0;
  double delta_v = 0.0;
};
const std::vector<OptimalReference>& optimal_references();
const OptimalReference& optimal_reference(const std::string& code);

/// Published sub-optimal propellant rows (guidance designed by the same method).
const std::vector<OptimalReference>& suboptimal_references();

/// Published optimal waypoint timeline.
const std::vector<Waypoint>& optimal_timeline();

struct ScenarioRow {
  DivertScenario scenario;
  bool ok = false;
  std::string error;
  PropellantBreakdown propellant;
  double time_of_flight = 0.0;
  bool audit_pass = false;
  double optimal_total = 0.0;
  double penalty = 0.0;      ///< [kg]
  double penalty_pct = 0.0;  ///< of the optimal total
};

std::vector<ScenarioRow> divert_matrix(const MissionDesign& design, const MissionConfig& cfg);

struct ReplayResult {
  MissionResult mission;
  std::vector<double> update_times;   ///< guidance re-solve instants
  std::vector<double> update_thrust;  ///< re-solved total thrust
  double pga_position_error = 0.0;    ///< [m]
  double pga_velocity_error = 0.0;    ///< [m/s]
  double freeze_time = 0.0;           ///< time of the last accepted update [s]
};

/// Braking burn flown in closed loop: every GNC period the thrust-adjusting
/// six-parameter law is re-solved from the current state, until time-to-go
/// drops below the freeze threshold.  `theta_offset` perturbs the initial
/// along-track angle from the nominal one.  Throws UnreachableError when the
/// perturbation cannot be absorbed.
ReplayResult replay_closed_loop(const MissionDesign& design, double theta_offset, const MissionConfig& cfg,
                                const DivertScenario& scenario = {});

}  // namespace ldg
