// Braking-burn guidance: bilinear tangent steering whose constants are found
// by shooting on the full spherical dynamics.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ldg/dynamics.hpp"
#include "ldg/moon.hpp"
#include "ldg/newton.hpp"

namespace ldg {

/// u(t) = (c (t - t0) + b) / |c (t - t0) + b| in the local (e_r, e_phi, e_theta) frame.
struct BilinearLaw {
  Vec3 b{0.0, 0.0, -1.0};
  Vec3 c = Vec3::Zero();
  double t0 = 0.0;      ///< start of the burn [s]
  double dt = 0.0;      ///< burn duration [s]
  double thrust = 0.0;  ///< constant total thrust [N]

  double t_end() const { return t0 + dt; }
  /// Throws DomainError if c (t - t0) + b vanishes.
  Vec3 direction(double t) const;
  /// Same steering expressed with a new time origin.
  BilinearLaw rebased(double new_t0) const;
};

/// Total thrust split between outer pair and centre engine in proportion to engine count.
ThrustCommand braking_command(const BilinearLaw& law, double t, const EngineModel& engine);

struct BrakingTarget {
  SphericalState x_f;  ///< desired state at the end of the burn (t and m unused)
  SphericalState z0;   ///< initial r, phi, v_r, v_phi, v_theta, m and start time t
  std::optional<double> theta0;  ///< required initial along-track angle, for the 6-parameter form
};

struct BrakingOptions {
  double thrust = 0.0;  ///< total thrust [N]; <= 0 selects engine.total_max()
  double step = 0.1;
  NewtonOptions newton;
  double scale_length = 1e4;    ///< [m]
  double scale_velocity = 1e2;  ///< [m/s]
  double scale_angle = 1e-2;    ///< [rad]
};

struct BrakingSolution {
  BilinearLaw law;
  SphericalState initial;  ///< state at law.t0, including the solved theta0
  double theta0 = 0.0;
  NewtonReport report;
};

/// dt = (m0 Isp g0 / T) (1 - exp(-|vf - v0| / (Isp g0))).
double tsiolkovsky_dt_guess(double m0, double thrust, double isp, const Vec3& v0, const Vec3& vf,
                            double g0 = 9.80665);

/// Purely tangential steering (b = (0,0,-1), c = 0) with the Tsiolkovsky duration.
BilinearLaw tangent_guess(const BrakingTarget& target, const EngineModel& engine, const MoonConstants& k,
                          double thrust);

/// Parameters y = [dt, c_phi, c_r, b_phi, b_r] (b_theta = -1, c_theta = 0).
BilinearLaw law_from_params5(const Eigen::VectorXd& y, double t0, double thrust);
Eigen::VectorXd params5_from_law(const BilinearLaw& law);

/// Scaled mismatch between the back-propagated initial state and z0.
Eigen::VectorXd braking5_residual(const BrakingTarget& target, const EngineModel& engine, const MoonConstants& k,
                                  const BrakingOptions& options, const Eigen::VectorXd& y);

/// Five-parameter solve with free initial along-track angle.  The state at x_f
/// is back-propagated for each candidate; its mass follows the linear mass law.
BrakingSolution solve_braking_5(const BrakingTarget& target, const EngineModel& engine, const MoonConstants& k,
                                const BrakingOptions& options = {},
                                const std::optional<BilinearLaw>& guess = std::nullopt);

/// Six-parameter solve y = [dt, c_phi, c_r, b_phi, b_r, T] from a fully
/// specified initial state, matching all six kinematic states at x_f by
/// forward propagation.  Throws UnreachableError when the required thrust is
/// outside [engine.total_min(), engine.total_max()].
BrakingSolution solve_braking_6(const SphericalState& initial, const SphericalState& x_f, const EngineModel& engine,
                                const MoonConstants& k, const BrakingOptions& options = {},
                                const std::optional<BilinearLaw>& guess = std::nullopt);

Eigen::VectorXd braking6_residual(const SphericalState& initial, const SphericalState& x_f, const EngineModel& engine,
                                  const MoonConstants& k, const BrakingOptions& options, const Eigen::VectorXd& y);

struct ThrustSweepPoint {
  double thrust = 0.0;
  double theta0 = 0.0;  ///< [rad]
  double dt = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;
};

/// Reachable initial along-track angle per thrust level.  Failures are recorded per point.
std::vector<ThrustSweepPoint> sweep_thrust_theta0(const BrakingTarget& target, const EngineModel& engine,
                                                  const MoonConstants& k, const std::vector<double>& thrusts,
                                                  const BrakingOptions& options = {});

}  // namespace ldg
