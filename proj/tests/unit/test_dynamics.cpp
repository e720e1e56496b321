#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ldg/dynamics.hpp"
#include "ldg/errors.hpp"

using namespace ldg;

namespace {

// Independent Cartesian oracle: d/dt of the converted state.
StateVector spherical_rate_by_difference(const SphericalState& s, const ThrustCommand& cmd, const MoonConstants& k,
                                         const EngineModel& e) {
  const CartesianState c = spherical_to_cartesian(s);
  const LocalFrame f = local_frame(s.phi, s.theta);
  const Vec3 acc = -k.mu * c.position / std::pow(c.position.norm(), 3) + f.to_inertial(cmd.u) * cmd.total() / s.m;
  const double h = 1e-3;
  CartesianState a = c, b = c;
  a.position -= h * c.velocity;
  a.velocity -= h * acc;
  b.position += h * c.velocity;
  b.velocity += h * acc;
  const StateVector xa = to_vector(cartesian_to_spherical(a));
  const StateVector xb = to_vector(cartesian_to_spherical(b));
  StateVector d = (xb - xa) / (2 * h);
  d(6) = -cmd.total() / (e.isp * k.g0);
  return d;
}

}  // namespace

TEST_CASE("spherical equations of motion agree with inertial dynamics") {
  const MoonConstants k;
  const EngineModel e;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-0.5, 0.5), v(-1700, 1700), th(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    SphericalState s{0.0, k.r_moon + 2e4, ang(rng), 1.3 + ang(rng), v(rng) / 20, v(rng) / 10, v(rng), 6000.0};
    const ThrustCommand cmd = ThrustCommand::from_angles(12000.0, 6000.0, ang(rng), th(rng) * 2);
    const StateVector got = eom_spherical(s, cmd, e, k);
    const StateVector want = spherical_rate_by_difference(s, cmd, k, e);
    for (int j = 0; j < 7; ++j) {
      const double scale = j < 3 ? 1e-6 : 1e-5;
      CHECK(std::abs(got(j) - want(j)) < scale * std::max(1.0, std::abs(want(j))) + (j < 3 ? 1e-9 : 1e-6));
    }
  }
}

TEST_CASE("command angles produce unit directions") {
  for (double a : {-1.0, 0.0, 0.4})
    for (double b : {-2.0, 0.0, 1.0, 3.0}) {
      const ThrustCommand c = ThrustCommand::from_angles(1.0, 0.0, a, b);
      CHECK(c.u.norm() == doctest::Approx(1.0));
      CHECK(c.alpha() == doctest::Approx(a));
      CHECK(std::remainder(c.beta() - b, 2 * std::numbers::pi) == doctest::Approx(0.0));
    }
}

TEST_CASE("pitch angle of local directions") {
  CHECK(pitch_angle(Vec3(1, 0, 0)) == doctest::Approx(std::numbers::pi / 2));
  CHECK(pitch_angle(Vec3(0, 0, -1)) == doctest::Approx(0.0));
  CHECK(pitch_angle(Vec3(1, 0, -1).normalized()) == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("engine limits") {
  const EngineModel e;
  CHECK(e.t1_min() == 6000.0);
  CHECK(e.t1_max() == 12000.0);
  CHECK(e.t2_min() == 3000.0);
  CHECK(e.t2_max() == 6000.0);
  CHECK(e.t1_rate_max() == 400.0);
  CHECK(e.t2_rate_max() == 200.0);
  CHECK(e.stack_rate_max() == 600.0);
  CHECK(e.total_max() == 18000.0);
  CHECK(e.outer_share() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("linear mass law matches the mass-flow rate") {
  const double m = mass_linear(7000.0, 18000.0, 330.0, 100.0);
  CHECK(m == doctest::Approx(7000.0 - 18000.0 * 100.0 / (330.0 * 9.80665)));
  CHECK_THROWS_AS(mass_linear(7000.0, 18000.0, 330.0, 2000.0, 9.80665, 1000.0), InfeasibleBurnError);
  CHECK_THROWS_AS(mass_linear(7000.0, 18000.0, 330.0, -1.0), DomainError);
}

TEST_CASE("singular frame and negative radius are rejected") {
  const EngineModel e;
  const MoonConstants k;
  SphericalState s{0.0, k.r_moon, std::numbers::pi / 2, 1.0, 0, 0, 0, 1000};
  CHECK_THROWS_AS(eom_spherical(s, {}, e, k), SingularFrameError);
  s.phi = 0.0;
  s.r = -1.0;
  CHECK_THROWS_AS(eom_spherical(s, {}, e, k), DomainError);
}

TEST_CASE("planar state with planar thrust stays planar") {
  const MoonConstants k;
  const EngineModel e;
  SphericalState s{0.0, k.r_moon + 1e4, 0.0, 1.2, -20.0, 0.0, 1500.0, 5000.0};
  const ThrustCommand cmd = ThrustCommand::from_angles(12000.0, 6000.0, 0.0, 2.5);
  const StateVector d = eom_spherical(s, cmd, e, k);
  CHECK(d(1) == 0.0);
  CHECK(d(4) == 0.0);
}

TEST_CASE("total acceleration mode ignores gravity in the command") {
  const MoonConstants k;
  const EngineModel e;
  CartesianState c;
  c.position = Vec3(0, 0, k.r_moon + 1000);
  c.velocity = Vec3(1, 2, 3);
  c.m = 4000.0;
  const Vec3 a(0.1, -0.2, 0.3);
  const StateVector d = eom_cartesian(c, a, AccelMode::total, e, k);
  CHECK(d(3) == doctest::Approx(0.1));
  CHECK(d(5) == doctest::Approx(0.3));
  const double thrust = c.m * (a - gravity_accel(c.position, k)).norm();
  CHECK(d(6) == doctest::Approx(-thrust / (e.isp * k.g0)));
  const StateVector d2 = eom_cartesian(c, a, AccelMode::thrust_specific, e, k);
  CHECK(d2(5) == doctest::Approx(0.3 - k.mu / c.position.squaredNorm()));
}
