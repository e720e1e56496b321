// Cubic total-acceleration guidance for the powered descent and the two
// hazard-avoidance diverts.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldg/dynamics.hpp"
#include "ldg/moon.hpp"
#include "ldg/propagator.hpp"

namespace ldg {

/// a(t) = a0 + c1 tau + c2 tau^2 + c3 tau^3 with tau = t - t_start.
struct CubicLaw {
  Vec3 a0 = Vec3::Zero();
  Vec3 c1 = Vec3::Zero();
  Vec3 c2 = Vec3::Zero();
  Vec3 c3 = Vec3::Zero();
  double tf = 0.0;
  double t_start = 0.0;

  Vec3 accel(double t) const;
  /// Closed-form velocity and position from the segment start values.
  Vec3 velocity(double t, const Vec3& v0) const;
  Vec3 position(double t, const Vec3& r0, const Vec3& v0) const;
};

struct DescentBoundary {
  Vec3 r0 = Vec3::Zero(), v0 = Vec3::Zero(), a0 = Vec3::Zero();
  Vec3 rf = Vec3::Zero(), vf = Vec3::Zero(), af = Vec3::Zero();
  double tf = 0.0;
};

/// Throws DomainError for tf <= 0.
CubicLaw cubic_coefficients(const DescentBoundary& b, double t_start = 0.0);

struct GateTarget {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

/// Vertical gate above the landing site moved `shift` metres along track
/// (negative = beyond the site), descending vertically at `descent_speed`.
GateTarget vertical_gate(double shift, double gate_altitude, double descent_speed, const MoonConstants& k);

struct ThrustTrace {
  std::vector<ThrustCommand> commands;  ///< all thrust on the outer pair
  std::vector<std::string> violations;
};

/// Thrust needed to follow the law along a state trace.
ThrustTrace thrust_from_total_accel(const CubicLaw& law, const std::vector<CartesianState>& trace,
                                    const EngineModel& engine, const MoonConstants& k);

/// New cubic from `current` (with its current total acceleration) to the gate.
/// Throws DomainError when |shift_increment| exceeds max_shift.
CubicLaw plan_divert(const CartesianState& current, const Vec3& current_accel, const GateTarget& gate,
                     double tf_div, double shift_increment, double max_shift);

struct DivertSpec {
  double hda1_shift = 0.0;      ///< applied at the low gate [m]
  double hda2_shift = 0.0;      ///< applied at the second gate [m]
  std::optional<double> tf_div; ///< low gate to vertical gate time; remaining time when unset
};

struct PoweredDescentSpec {
  SphericalState start;
  ThrustCommand start_cmd;      ///< command at the start, local frame
  double tf = 40.0;             ///< start to vertical gate [s]
  double lga_altitude = 500.0;
  double hda2_altitude = 150.0;
  double hda1_max = 100.0;
  double hda2_max = 20.0;
  double vga_altitude = 30.0;
  double descent_speed = 2.0;
  DivertSpec divert;
  double step = 0.1;
};

struct DescentMetrics {
  double propellant = 0.0;
  double max_pitch_rate_dps = 0.0;
  double max_t1_rate = 0.0;
  double max_t2_rate = 0.0;     ///< while the centre engine is lit
  double max_stack_rate = 0.0;  ///< while the centre engine is lit
  double t1_min = 0.0, t1_max = 0.0;
  double t2_min = 0.0, t2_max = 0.0;  ///< 0 when the centre engine never fires
};

/// Throttle, thrust and pitch-rate metrics over a trajectory.  The centre
/// engine shutdown step is excluded from the rate figures.
DescentMetrics measure(const Trajectory& traj);

struct PoweredDescentResult {
  Trajectory trajectory;
  std::optional<TrajectorySample> lga;   ///< before the centre engine cutoff
  std::optional<TrajectorySample> hda2;
  SphericalState vga;
  ThrustCommand vga_cmd;
  std::vector<CubicLaw> laws;
  DescentMetrics metrics;
};

/// Flies the cubic from `start` to the vertical gate.  While the centre engine
/// is lit thrust is shared in proportion to engine count; at the low gate the
/// centre engine is cut, the outer pair keeps its thrust and the cubic is
/// replanned to the (possibly shifted) gate.  A second replan happens at the
/// HDA2 altitude when that divert is non-zero.
PoweredDescentResult fly_powered_descent(const PoweredDescentSpec& spec, const EngineModel& engine,
                                         const MoonConstants& k);

struct DescentLimits {
  double max_pitch_rate_dps = 5.0;
  double tolerance = 1e-6;  ///< relative slack on every limit
};

bool within_limits(const DescentMetrics& m, const EngineModel& engine, const DescentLimits& lim);

struct TofSweepRow {
  double tf = 0.0;
  DescentMetrics metrics;
  bool feasible = false;
  std::string error;  ///< non-empty when the point failed to fly
};

using DescentFamily = std::function<PoweredDescentSpec(double tf)>;

std::vector<TofSweepRow> sweep_tof(const DescentFamily& family, const std::vector<double>& tf_grid,
                                   const EngineModel& engine, const MoonConstants& k,
                                   const DescentLimits& limits = {});

}  // namespace ldg
