#include "ldg/pitch_up.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/errors.hpp"

namespace ldg {

namespace {
constexpr double kAlignedTolerance = 0.01 * std::numbers::pi / 180.0;
}

Vec3 PitchUpPlan::direction(double t) const {
  const double psi = std::clamp(rate * (t - t_start), 0.0, angle);
  // Rodrigues rotation about an axis orthogonal to u0.
  return std::cos(psi) * u0 + std::sin(psi) * axis.cross(u0);
}

double PitchUpPlan::t1(double t) const {
  const double tau = std::clamp(t - t_start, 0.0, dt);
  return std::max(t1_start - t1_rate * tau, std::min(t1_floor, t1_start));
}

double PitchUpPlan::t2(double t) const {
  if (t2_start <= 0.0) return 0.0;
  const double tau = std::clamp(t - t_start, 0.0, dt);
  return std::max(t2_start - t2_rate * tau, std::min(t2_floor, t2_start));
}

ThrustCommand PitchUpPlan::command(double t, const SphericalState& s) const {
  ThrustCommand cmd;
  cmd.t1 = t1(t);
  cmd.t2 = t2(t);
  cmd.u = local_frame(s.phi, s.theta).to_local(direction(t));
  return cmd;
}

bool PitchUpPlan::floor_reached() const {
  return t1_start - t1_rate * dt < t1_floor || (t2_start > 0.0 && t2_start - t2_rate * dt < t2_floor);
}

PitchUpPlan plan_pitch_up(const SphericalState& pga, const ThrustCommand& cmd, double target_pitch,
                          double max_pitch_rate, const EngineModel& engine) {
  if (!(max_pitch_rate > 0.0)) throw DomainError("plan_pitch_up: pitch rate must be positive");
  const LocalFrame f = local_frame(pga.phi, pga.theta);

  PitchUpPlan plan;
  plan.t_start = pga.t;
  plan.rate = max_pitch_rate;
  plan.u0 = f.to_inertial(cmd.u.normalized());
  plan.t1_start = cmd.t1;
  plan.t2_start = cmd.t2;
  plan.t1_rate = engine.t1_rate_max();
  plan.t2_rate = engine.t2_rate_max();
  plan.t1_floor = engine.t1_min();
  plan.t2_floor = engine.t2_min();

  Vec3 horizontal = plan.u0 - plan.u0.dot(f.e_r) * f.e_r;
  if (horizontal.norm() < 1e-12) throw DomainError("plan_pitch_up: vertical thrust leaves the slew plane undefined");
  horizontal.normalize();
  plan.uf = std::cos(target_pitch) * horizontal + std::sin(target_pitch) * f.e_r;

  plan.angle = angle_between(plan.u0, plan.uf);
  if (plan.angle < kAlignedTolerance) {
    plan.angle = 0.0;
    plan.uf = plan.u0;
    plan.dt = 0.0;
    return plan;
  }
  const Vec3 cross = plan.u0.cross(plan.uf);
  if (cross.norm() < 1e-12) throw DomainError("plan_pitch_up: initial and final directions are antiparallel");
  plan.axis = cross.normalized();
  plan.dt = plan.angle / plan.rate;
  return plan;
}

PitchUpFlight fly_pitch_up(const PitchUpPlan& plan, const SphericalState& start, const EngineModel& engine,
                           const MoonConstants& k, const PropagationOptions& options) {
  const Steering steer = [&plan](double t, const SphericalState& s) { return plan.command(t, s); };
  PitchUpFlight out;
  out.flight = propagate(start, steer, plan.dt, options, engine, k);
  out.floor_reached = plan.floor_reached();
  return out;
}

}  // namespace ldg
