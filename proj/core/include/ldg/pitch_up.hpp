// Constant-rate slew of the thrust direction toward the vertical, with a
// simultaneous linear thrust ramp-down.
#pragma once

#include <vector>

#include "ldg/dynamics.hpp"
#include "ldg/moon.hpp"
#include "ldg/propagator.hpp"

namespace ldg {

struct PitchUpPlan {
  Vec3 u0 = Vec3::UnitX();    ///< initial thrust direction, inertial
  Vec3 uf = Vec3::UnitX();    ///< final thrust direction, inertial
  Vec3 axis = Vec3::UnitY();  ///< (u0 x uf) / |u0 x uf|
  double angle = 0.0;         ///< total slew [rad]
  double rate = 0.0;          ///< slew rate [rad/s]
  double t_start = 0.0;
  double dt = 0.0;
  double t1_start = 0.0, t2_start = 0.0;  ///< [N]
  double t1_rate = 0.0, t2_rate = 0.0;    ///< ramp-down rates [N/s]
  double t1_floor = 0.0, t2_floor = 0.0;  ///< ramp floors [N]

  double t_end() const { return t_start + dt; }
  /// Inertial thrust direction at t (held at the endpoints outside the slew).
  Vec3 direction(double t) const;
  double t1(double t) const;
  double t2(double t) const;
  /// Command in the local frame of state s.
  ThrustCommand command(double t, const SphericalState& s) const;
  /// True when a thrust floor is reached before the slew ends.
  bool floor_reached() const;
};

/// Plans the slew from the PGA command to the target elevation within the
/// vertical plane of the initial thrust direction.  Returns a zero-duration
/// plan when the command is already within 0.01 deg of the target; throws
/// DomainError when the two directions are antiparallel or the initial
/// direction is vertical (undefined axis).
PitchUpPlan plan_pitch_up(const SphericalState& pga, const ThrustCommand& cmd_at_pga, double target_pitch_rad,
                          double max_pitch_rate_rad, const EngineModel& engine);

struct PitchUpFlight {
  PropagationResult flight;
  bool floor_reached = false;  ///< thrust floor hit during the slew
};

/// Integrates the slew.  Events in `options` (e.g. an altitude gate) may end
/// the flight early.
PitchUpFlight fly_pitch_up(const PitchUpPlan& plan, const SphericalState& start, const EngineModel& engine,
                           const MoonConstants& k, const PropagationOptions& options = {});

}  // namespace ldg
