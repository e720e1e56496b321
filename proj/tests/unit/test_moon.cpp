#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ldg/errors.hpp"
#include "ldg/moon.hpp"

using namespace ldg;

TEST_CASE("periselene speed of the 100 x 30 km orbit from vis-viva") {
  const MoonConstants k;
  const SphericalState s = periselene_state(30e3, 100e3, 7000.0, k);
  // independent: v^2 = mu (2/rp - 1/a)
  const double rp = k.r_moon + 30e3, ra = k.r_moon + 100e3;
  const double v = std::sqrt(k.mu * (2.0 / rp - 2.0 / (rp + ra)));
  CHECK(s.v_theta == doctest::Approx(v).epsilon(1e-12));
  CHECK(std::abs(s.v_theta - 1681.6) < 0.2);
  CHECK(s.v_r == 0.0);
  CHECK(s.v_phi == 0.0);
  CHECK(s.r == doctest::Approx(rp));
}

TEST_CASE("orbital period matches Kepler's third law") {
  const MoonConstants k;
  const double a = k.r_moon + 65e3;
  CHECK(orbital_period(30e3, 100e3, k) == doctest::Approx(2 * std::numbers::pi * std::sqrt(a * a * a / k.mu)));
}

TEST_CASE("local frame is orthonormal and right-handed") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ph(-1.2, 1.2), th(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const LocalFrame f = local_frame(ph(rng), th(rng));
    CHECK(f.e_r.norm() == doctest::Approx(1.0));
    CHECK(f.e_phi.norm() == doctest::Approx(1.0));
    CHECK(f.e_theta.norm() == doctest::Approx(1.0));
    CHECK(std::abs(f.e_r.dot(f.e_phi)) < 1e-14);
    CHECK(std::abs(f.e_r.dot(f.e_theta)) < 1e-14);
    CHECK(std::abs(f.e_phi.dot(f.e_theta)) < 1e-14);
    CHECK(std::abs(std::abs(f.e_r.cross(f.e_phi).dot(f.e_theta)) - 1.0) < 1e-14);
  }
}

TEST_CASE("landing site sits on the third axis") {
  SphericalState s;
  s.r = 1737400.0;
  s.theta = std::numbers::pi / 2;
  const CartesianState c = spherical_to_cartesian(s);
  CHECK(std::abs(c.position.x()) < 1e-6);
  CHECK(std::abs(c.position.y()) < 1e-6);
  CHECK(c.position.z() == doctest::Approx(s.r));
  CHECK(downrange(s, MoonConstants{}) == doctest::Approx(0.0));
}

TEST_CASE("spherical and cartesian conversions round-trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ph(-1.0, 1.0), th(0.3, 2.8), v(-2000, 2000);
  for (int i = 0; i < 500; ++i) {
    SphericalState s{1.0, 1.74e6 + 1e4 * i, ph(rng), th(rng), v(rng), v(rng), v(rng), 5000.0};
    const SphericalState b = cartesian_to_spherical(spherical_to_cartesian(s));
    CHECK(b.r == doctest::Approx(s.r).epsilon(1e-13));
    CHECK(std::abs(b.phi - s.phi) < 1e-12);
    CHECK(std::abs(b.theta - s.theta) < 1e-12);
    CHECK(std::abs(b.v_r - s.v_r) < 1e-8);
    CHECK(std::abs(b.v_phi - s.v_phi) < 1e-8);
    CHECK(std::abs(b.v_theta - s.v_theta) < 1e-8);
    CHECK(b.m == s.m);
    CHECK(b.t == s.t);
  }
}

TEST_CASE("speed is invariant under conversion") {
  SphericalState s{0.0, 1.75e6, 0.2, 1.1, -30.0, 5.0, 1600.0, 1.0};
  const CartesianState c = spherical_to_cartesian(s);
  CHECK(c.velocity.norm() == doctest::Approx(std::sqrt(30.0 * 30 + 25 + 1600.0 * 1600)));
}

TEST_CASE("gravity is central with inverse-square magnitude") {
  const MoonConstants k;
  const Vec3 p(1e6, -2e6, 5e5);
  const Vec3 g = gravity_accel(p, k);
  CHECK(g.norm() == doctest::Approx(k.mu / p.squaredNorm()));
  CHECK(g.normalized().dot(p.normalized()) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(gravity_accel(Vec3::Zero(), k), DomainError);
}

TEST_CASE("downrange inverts") {
  const MoonConstants k;
  for (double d : {-500.0, 0.0, 622.9, 473756.6}) {
    SphericalState s;
    s.r = k.r_moon;
    s.theta = theta_from_downrange(d, k);
    CHECK(downrange(s, k) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("uniform field keeps the requested surface gravity") {
  const MoonConstants u = MoonConstants::uniform_field(1.6);
  CHECK(u.surface_gravity() == doctest::Approx(1.6));
  const double h = 2e5;
  CHECK(u.mu / std::pow(u.r_moon + h, 2) == doctest::Approx(1.6).epsilon(1e-5));
}

TEST_CASE("constants validation") {
  MoonConstants k;
  CHECK_NOTHROW(k.validate());
  k.mu = -1.0;
  CHECK_THROWS_AS(k.validate(), DomainError);
}
