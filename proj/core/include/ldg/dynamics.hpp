// Thrusted equations of motion and the mass-flow law.
#pragma once

#include <Eigen/Core>

#include "ldg/moon.hpp"

namespace ldg {

/// (r, phi, theta, v_r, v_phi, v_theta, m) or (x, y, z, vx, vy, vz, m).
using StateVector = Eigen::Matrix<double, 7, 1>;

StateVector to_vector(const SphericalState& s);
SphericalState spherical_from_vector(double t, const StateVector& x);
StateVector to_vector(const CartesianState& c);
CartesianState cartesian_from_vector(double t, const StateVector& x);

/// Thrust of the outer pair (t1, combined) and centre engine (t2) along the
/// unit direction u = (u_r, u_phi, u_theta) of the local frame.
struct ThrustCommand {
  double t1 = 0.0;  ///< [N]
  double t2 = 0.0;  ///< [N]
  Vec3 u{1.0, 0.0, 0.0};

  double total() const { return t1 + t2; }

  /// u = (cos a cos b, sin a, cos a sin b).
  static ThrustCommand from_angles(double t1, double t2, double alpha, double beta);
  double alpha() const;
  double beta() const;
};

/// Elevation of a local-frame direction above the local horizontal [rad].
double pitch_angle(const Vec3& u_local);

struct EngineModel {
  double isp = 330.0;               ///< [s]
  double t_engine_max = 6000.0;     ///< per engine [N]
  double t_engine_min = 3000.0;     ///< per engine [N]
  double throttle_rate_max = 200.0; ///< per engine [N/s]
  int n_engines_phase1 = 3;         ///< engines lit from MBB to LGA
  int n_engines_phase3 = 2;         ///< outer pair, lit for the whole descent

  void validate() const;

  int n_outer() const { return n_engines_phase3; }
  int n_center() const { return n_engines_phase1 - n_engines_phase3; }

  double t1_min() const { return n_outer() * t_engine_min; }
  double t1_max() const { return n_outer() * t_engine_max; }
  double t2_min() const { return n_center() * t_engine_min; }
  double t2_max() const { return n_center() * t_engine_max; }
  double t1_rate_max() const { return n_outer() * throttle_rate_max; }
  double t2_rate_max() const { return n_center() * throttle_rate_max; }
  double stack_rate_max() const { return n_engines_phase1 * throttle_rate_max; }
  double total_max() const { return n_engines_phase1 * t_engine_max; }
  double total_min() const { return n_engines_phase1 * t_engine_min; }

  /// Share of a three-engine total carried by the outer pair.
  double outer_share() const { return static_cast<double>(n_outer()) / n_engines_phase1; }

  double mass_flow(double thrust, double g0) const { return thrust / (isp * g0); }
};

/// Right-hand side of the spherical equations of motion.
/// Throws SingularFrameError at cos(phi) == 0 and DomainError for r <= 0.
StateVector eom_spherical(const SphericalState& s, const ThrustCommand& cmd, const EngineModel& engine,
                          const MoonConstants& constants);

enum class AccelMode {
  /// The command is the total acceleration r'' (gravity already included);
  /// thrust magnitude is m |a - g|.
  total,
  /// The command is the thrust-specific acceleration; gravity is added.
  thrust_specific,
};

StateVector eom_cartesian(const CartesianState& s, const Vec3& accel_cmd, AccelMode mode,
                          const EngineModel& engine, const MoonConstants& constants);

/// m(t) = m0 - T/(g0 Isp) dt.  Throws InfeasibleBurnError when the result is
/// at or below dry_floor, DomainError for dt < 0.
double mass_linear(double m0, double thrust, double isp, double dt, double g0 = 9.80665, double dry_floor = 0.0);

}  // namespace ldg
