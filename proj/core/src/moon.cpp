#include "ldg/moon.hpp"

#include <cmath>
#include <numbers>

#include "ldg/errors.hpp"

namespace ldg {

void MoonConstants::validate() const {
  if (!(mu > 0.0) || !(r_moon > 0.0) || !(g0 > 0.0)) {
    throw DomainError("moon constants must be strictly positive");
  }
  // Uniform-field bodies are allowed any radius; the sanity band is on gravity.
  const double g = surface_gravity();
  if (r_moon < 1.0e10 && (g < 1.5 || g > 1.8)) {
    throw DomainError("surface gravity " + std::to_string(g) + " m/s^2 outside [1.5, 1.8]");
  }
}

MoonConstants MoonConstants::uniform_field(double surface_gravity, double radius) {
  MoonConstants k;
  k.r_moon = radius;
  k.mu = surface_gravity * radius * radius;
  return k;
}

LocalFrame local_frame(double phi, double theta) {
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  return LocalFrame{Vec3{cp * ct, sp, cp * st}, Vec3{-sp * ct, cp, -sp * st}, Vec3{-st, 0.0, ct}};
}

LocalFrame local_frame(const Vec3& position) {
  const double r = position.norm();
  if (!(r > 0.0)) throw DomainError("local frame undefined at the origin");
  const double rho = std::hypot(position.x(), position.z());
  if (rho == 0.0) throw SingularFrameError("local frame undefined on the polar axis");
  return local_frame(std::asin(position.y() / r), std::atan2(position.z(), position.x()));
}

Vec3 gravity_accel(const Vec3& position, const MoonConstants& constants) {
  const double r2 = position.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("gravity undefined at zero radius");
  return -constants.mu / (r2 * std::sqrt(r2)) * position;
}

CartesianState spherical_to_cartesian(const SphericalState& s) {
  const LocalFrame f = local_frame(s.phi, s.theta);
  CartesianState c;
  c.t = s.t;
  c.position = s.r * f.e_r;
  c.velocity = f.to_inertial(Vec3{s.v_r, s.v_phi, s.v_theta});
  c.m = s.m;
  return c;
}

SphericalState cartesian_to_spherical(const CartesianState& c) {
  const Vec3& p = c.position;
  const double r = p.norm();
  if (!(r > 0.0)) throw DomainError("spherical state undefined at zero radius");
  const double rho = std::hypot(p.x(), p.z());
  if (rho == 0.0) throw SingularFrameError("cos(phi) = 0: spherical frame is singular");
  SphericalState s;
  s.t = c.t;
  s.r = r;
  s.phi = std::atan2(p.y(), rho);
  s.theta = std::atan2(p.z(), p.x());
  const LocalFrame f = local_frame(s.phi, s.theta);
  const Vec3 v = f.to_local(c.velocity);
  s.v_r = v.x();
  s.v_phi = v.y();
  s.v_theta = v.z();
  s.m = c.m;
  return s;
}

SphericalState periselene_state(double peri_alt, double apo_alt, double mass, const MoonConstants& k) {
  if (!(peri_alt >= 0.0) || !(apo_alt >= peri_alt)) {
    throw DomainError("periselene_state requires apo_alt >= peri_alt >= 0");
  }
  const double rp = k.r_moon + peri_alt;
  const double a = k.r_moon + 0.5 * (peri_alt + apo_alt);
  SphericalState s;
  s.r = rp;
  s.v_theta = std::sqrt(k.mu * (2.0 / rp - 1.0 / a));
  s.m = mass;
  return s;
}

double orbital_period(double peri_alt, double apo_alt, const MoonConstants& k) {
  const double a = k.r_moon + 0.5 * (peri_alt + apo_alt);
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / k.mu);
}

double downrange(const SphericalState& s, const MoonConstants& k) {
  return k.r_moon * (std::numbers::pi / 2.0 - s.theta);
}

double theta_from_downrange(double downrange_m, const MoonConstants& k) {
  return std::numbers::pi / 2.0 - downrange_m / k.r_moon;
}

}  // namespace ldg
