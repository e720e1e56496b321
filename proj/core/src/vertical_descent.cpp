#include "ldg/vertical_descent.hpp"

#include <cmath>
#include <string>

#include "ldg/errors.hpp"

namespace ldg {

VerticalDescentResult fly_vertical(const SphericalState& vga, double descent_speed, double pitch_at_gate_deg,
                                   const EngineModel& engine, const MoonConstants& k, double step,
                                   const VerticalGateTolerances& tol) {
  if (!(descent_speed > 0.0)) throw DomainError("fly_vertical: descent speed must be positive");
  if (horizontal_speed(vga) >= tol.horizontal_speed) {
    throw GateFailure("vertical gate: horizontal speed " + std::to_string(horizontal_speed(vga)) + " m/s");
  }
  if (std::abs(vga.v_r + descent_speed) > tol.vertical_speed) {
    throw GateFailure("vertical gate: vertical speed " + std::to_string(vga.v_r) + " m/s");
  }
  if (std::abs(pitch_at_gate_deg - 90.0) > tol.pitch_deg) {
    throw GateFailure("vertical gate: pitch " + std::to_string(pitch_at_gate_deg) + " deg");
  }
  const double h0 = altitude(vga, k);
  if (!(h0 > 0.0)) throw GateFailure("vertical gate: not above the surface");

  const Steering weight = [&k](double, const SphericalState& s) {
    ThrustCommand c;
    c.t1 = s.m * k.mu / (s.r * s.r);
    c.t2 = 0.0;
    c.u = Vec3(1.0, 0.0, 0.0);
    return c;
  };
  PropagationOptions opt;
  opt.step = step;
  opt.events = {EventSpec::altitude(0.0)};
  VerticalDescentResult out;
  out.flight = propagate(vga, weight, 2.0 * h0 / descent_speed + 10.0, opt, engine, k);
  if (!out.flight.event) throw PhaseError("vertical_descent", "surface not reached");
  out.propellant = vga.m - out.flight.final_state.m;
  out.duration = out.flight.final_state.t - vga.t;
  return out;
}

}  // namespace ldg
