// Lunar environment: constants, landing-site frames, state conversions and gravity.
//
// All positions are expressed in an inertial frame centred on the Moon whose
// third axis passes through the landing site.  The landing site therefore sits
// at phi = 0, theta = pi/2.  The frame does not rotate with the Moon.
#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace ldg {

using Vec3 = Eigen::Vector3d;

struct MoonConstants {
  double mu = 4.9028e12;      ///< gravitational parameter [m^3/s^2]
  double r_moon = 1737400.0;  ///< mean radius [m]
  double g0 = 9.80665;        ///< standard gravity used for Isp conversion [m/s^2]

  double surface_gravity() const { return mu / (r_moon * r_moon); }

  /// Throws DomainError unless every field is positive and surface gravity is plausible.
  void validate() const;

  /// A very large body with the given surface gravity.  Over a few hundred
  /// kilometres the field is uniform and the landing-site frame is flat to
  /// well below 1e-4 degrees, which lets the spherical solvers be checked
  /// against flat-planet references.
  static MoonConstants uniform_field(double surface_gravity, double radius = 1.0e11);
};

/// Lander state in landing-site spherical coordinates.
struct SphericalState {
  double t = 0.0;        ///< [s]
  double r = 0.0;        ///< distance from the Moon centre [m]
  double phi = 0.0;      ///< out-of-plane angle [rad]
  double theta = 0.0;    ///< along-track angle, pi/2 at the landing site [rad]
  double v_r = 0.0;      ///< [m/s]
  double v_phi = 0.0;    ///< [m/s]
  double v_theta = 0.0;  ///< [m/s]
  double m = 0.0;        ///< [kg]
};

struct CartesianState {
  double t = 0.0;
  Vec3 position = Vec3::Zero();  ///< relative to the Moon centre [m]
  Vec3 velocity = Vec3::Zero();  ///< inertial [m/s]
  double m = 0.0;
};

/// Unit vectors (e_r, e_phi, e_theta) at a point, expressed in the inertial frame.
struct LocalFrame {
  Vec3 e_r;
  Vec3 e_phi;
  Vec3 e_theta;

  Vec3 to_inertial(const Vec3& local) const { return local.x() * e_r + local.y() * e_phi + local.z() * e_theta; }
  Vec3 to_local(const Vec3& inertial) const {
    return {e_r.dot(inertial), e_phi.dot(inertial), e_theta.dot(inertial)};
  }
};

LocalFrame local_frame(double phi, double theta);
LocalFrame local_frame(const Vec3& position);

/// Point-mass gravity, -mu r_hat / |r|^2.  Throws DomainError at the origin.
Vec3 gravity_accel(const Vec3& position, const MoonConstants& constants);

CartesianState spherical_to_cartesian(const SphericalState& s);
/// Throws SingularFrameError when the position lies on the frame's polar axis.
SphericalState cartesian_to_spherical(const CartesianState& c);

/// State at the periapsis of an orbit with the given periapsis and apoapsis
/// altitudes.  Velocity is purely along +e_theta, from vis-viva.
SphericalState periselene_state(double peri_alt, double apo_alt, double mass, const MoonConstants& constants);

double orbital_period(double peri_alt, double apo_alt, const MoonConstants& constants);

inline double altitude(const SphericalState& s, const MoonConstants& k) { return s.r - k.r_moon; }
/// Along-track surface distance to the landing site, positive before it.
double downrange(const SphericalState& s, const MoonConstants& k);
/// Inverse of downrange() for an in-plane point.
double theta_from_downrange(double downrange_m, const MoonConstants& k);

inline double horizontal_speed(const SphericalState& s) { return std::hypot(s.v_phi, s.v_theta); }

}  // namespace ldg
