#include "ldg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldg/errors.hpp"

namespace ldg {

StateVector to_vector(const SphericalState& s) {
  StateVector x;
  x << s.r, s.phi, s.theta, s.v_r, s.v_phi, s.v_theta, s.m;
  return x;
}

SphericalState spherical_from_vector(double t, const StateVector& x) {
  return SphericalState{t, x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
}

StateVector to_vector(const CartesianState& c) {
  StateVector x;
  x << c.position, c.velocity, c.m;
  return x;
}

CartesianState cartesian_from_vector(double t, const StateVector& x) {
  return CartesianState{t, x.segment<3>(0), x.segment<3>(3), x[6]};
}

ThrustCommand ThrustCommand::from_angles(double t1, double t2, double alpha, double beta) {
  const double ca = std::cos(alpha);
  return ThrustCommand{t1, t2, Vec3{ca * std::cos(beta), std::sin(alpha), ca * std::sin(beta)}};
}

double ThrustCommand::alpha() const { return std::asin(std::clamp(u.y(), -1.0, 1.0)); }

double ThrustCommand::beta() const { return std::atan2(u.z(), u.x()); }

double pitch_angle(const Vec3& u_local) {
  const double n = u_local.norm();
  if (n == 0.0) return 0.0;
  return std::asin(std::clamp(u_local.x() / n, -1.0, 1.0));
}

void EngineModel::validate() const {
  if (!(isp > 0.0)) throw DomainError("engine isp must be positive");
  if (!(t_engine_min > 0.0) || !(t_engine_min <= t_engine_max)) {
    throw DomainError("engine thrust bounds must satisfy 0 < min <= max");
  }
  if (!(throttle_rate_max > 0.0)) throw DomainError("throttle rate must be positive");
  if (n_engines_phase3 < 1 || n_engines_phase1 < n_engines_phase3) {
    throw DomainError("engine counts must satisfy 1 <= phase3 <= phase1");
  }
}

StateVector eom_spherical(const SphericalState& s, const ThrustCommand& cmd, const EngineModel& engine,
                          const MoonConstants& k) {
  if (!(s.r > 0.0)) throw DomainError("eom_spherical: non-positive radius");
  const double cphi = std::cos(s.phi);
  if (std::abs(cphi) < 1e-12) throw SingularFrameError("eom_spherical: pole singularity");
  if (!(s.m > 0.0)) throw InfeasibleBurnError("eom_spherical: non-positive mass");

  const double tphi = std::tan(s.phi);
  const double thrust = cmd.total();
  const double acc = thrust / s.m;
  const double inv_r = 1.0 / s.r;

  StateVector d;
  d[0] = s.v_r;
  d[1] = s.v_phi * inv_r;
  d[2] = s.v_theta * inv_r / cphi;
  d[3] = (s.v_phi * s.v_phi + s.v_theta * s.v_theta) * inv_r - k.mu * inv_r * inv_r + acc * cmd.u.x();
  d[4] = -s.v_phi * s.v_r * inv_r - s.v_theta * s.v_theta * inv_r * tphi + acc * cmd.u.y();
  d[5] = -s.v_theta * s.v_r * inv_r + s.v_phi * s.v_theta * inv_r * tphi + acc * cmd.u.z();
  d[6] = -engine.mass_flow(thrust, k.g0);
  return d;
}

StateVector eom_cartesian(const CartesianState& s, const Vec3& accel_cmd, AccelMode mode, const EngineModel& engine,
                          const MoonConstants& k) {
  const Vec3 g = gravity_accel(s.position, k);
  Vec3 accel;
  double thrust;
  if (mode == AccelMode::total) {
    accel = accel_cmd;
    thrust = s.m * (accel_cmd - g).norm();
  } else {
    accel = accel_cmd + g;
    thrust = s.m * accel_cmd.norm();
  }
  StateVector d;
  d << s.velocity, accel, -engine.mass_flow(thrust, k.g0);
  return d;
}

double mass_linear(double m0, double thrust, double isp, double dt, double g0, double dry_floor) {
  if (dt < 0.0) throw DomainError("mass_linear: negative duration");
  const double m = m0 - thrust / (g0 * isp) * dt;
  if (!(m > dry_floor)) {
    throw InfeasibleBurnError("mass_linear: burn exhausts mass (" + std::to_string(m) + " kg)");
  }
  return m;
}

}  // namespace ldg
