// Constant-speed vertical descent from the vertical gate to touchdown.
#pragma once

#include "ldg/dynamics.hpp"
#include "ldg/moon.hpp"
#include "ldg/propagator.hpp"

namespace ldg {

struct VerticalGateTolerances {
  double horizontal_speed = 0.1;  ///< [m/s]
  double vertical_speed = 0.1;    ///< about -descent_speed [m/s]
  double pitch_deg = 1.0;         ///< about 90 deg
};

struct VerticalDescentResult {
  PropagationResult flight;  ///< ends at touchdown
  double propellant = 0.0;
  double duration = 0.0;
};

/// Thrust equals weight along +e_r until the surface.  Throws GateFailure when
/// the gate state is off the vertical descent conditions.
VerticalDescentResult fly_vertical(const SphericalState& vga, double descent_speed, double pitch_at_gate_deg,
                                   const EngineModel& engine, const MoonConstants& k, double step = 0.1,
                                   const VerticalGateTolerances& tol = {});

}  // namespace ldg
