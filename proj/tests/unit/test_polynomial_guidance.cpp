#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ldg/config.hpp"
#include "ldg/errors.hpp"
#include "ldg/mission.hpp"
#include "ldg/polynomial_guidance.hpp"

using namespace ldg;
using boost::math::quadrature::gauss_kronrod;

namespace {

DescentBoundary random_boundary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-3000.0, 3000.0), vel(-80.0, 80.0), acc(-3.0, 3.0), tf(5.0, 120.0);
  DescentBoundary b;
  b.r0 = {pos(rng), pos(rng), pos(rng)};
  b.v0 = {vel(rng), vel(rng), vel(rng)};
  b.a0 = {acc(rng), acc(rng), acc(rng)};
  b.rf = {pos(rng), pos(rng), pos(rng)};
  b.vf = {vel(rng), vel(rng), vel(rng)};
  b.af = {acc(rng), acc(rng), acc(rng)};
  b.tf = tf(rng);
  return b;
}

double rel(const Vec3& got, const Vec3& want, double scale) { return (got - want).norm() / std::max(scale, want.norm()); }

}  // namespace

TEST_CASE("unit step in one axis gives the quintic coefficients") {
  DescentBoundary b;
  b.rf = Vec3(1.0, 0.0, 0.0);
  b.tf = 1.0;
  const CubicLaw law = cubic_coefficients(b);
  CHECK(law.c1.x() == doctest::Approx(60.0));
  CHECK(law.c2.x() == doctest::Approx(-180.0));
  CHECK(law.c3.x() == doctest::Approx(120.0));
  CHECK(law.c1.tail<2>().norm() == 0.0);
}

TEST_CASE("random boundaries satisfy all nine boundary equations") {
  std::mt19937_64 rng(2024);
  double worst_closed = 0.0, worst_quad = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const DescentBoundary b = random_boundary(rng);
    const double t0 = 17.0 * (i % 3);
    const CubicLaw law = cubic_coefficients(b, t0);
    const double tf = t0 + b.tf;
    const double ps = b.rf.norm() + b.r0.norm() + b.v0.norm() * b.tf;
    const double vs = b.vf.norm() + b.v0.norm() + b.a0.norm() * b.tf;
    worst_closed = std::max({worst_closed, rel(law.accel(t0), b.a0, 1.0), rel(law.accel(tf), b.af, 1.0),
                             rel(law.velocity(tf, b.v0), b.vf, vs), rel(law.position(tf, b.r0, b.v0), b.rf, ps)});

    // independent quadrature of a(t): v(t) = v0 + int a, r(tf) = r0 + v0 tf + int (tf - s) a(s) ds
    Vec3 v_q, r_q;
    for (int j = 0; j < 3; ++j) {
      const auto a = [&](double s) { return law.accel(t0 + s)(j); };
      v_q(j) = b.v0(j) + gauss_kronrod<double, 15>::integrate(a, 0.0, b.tf);
      r_q(j) = b.r0(j) + b.v0(j) * b.tf +
               gauss_kronrod<double, 15>::integrate([&](double s) { return (b.tf - s) * a(s); }, 0.0, b.tf);
    }
    worst_quad = std::max({worst_quad, rel(v_q, b.vf, vs), rel(r_q, b.rf, ps)});
  }
  CHECK(worst_closed < 1e-9);
  CHECK(worst_quad < 1e-7);
}

TEST_CASE("non-positive time of flight is rejected") {
  DescentBoundary b;
  b.tf = 0.0;
  CHECK_THROWS_AS(cubic_coefficients(b), DomainError);
}

TEST_CASE("vertical gate target") {
  const MoonConstants k;
  const GateTarget g = vertical_gate(-100.0, 30.0, 2.0, k);
  const SphericalState s = cartesian_to_spherical({0.0, g.position, Vec3::Zero(), 1.0});
  CHECK(s.r == doctest::Approx(k.r_moon + 30.0));
  CHECK(downrange(s, k) == doctest::Approx(-100.0).epsilon(1e-9));
  CHECK(g.velocity.norm() == doctest::Approx(2.0));
  CHECK(g.velocity.dot(g.position.normalized()) == doctest::Approx(-2.0));
  CHECK(g.accel.norm() == 0.0);
}

TEST_CASE("divert shifts beyond the allowance are rejected") {
  const MoonConstants k;
  CartesianState c;
  c.position = Vec3(0, -300, k.r_moon + 500);
  c.velocity = Vec3(0, 15, -20);
  const GateTarget g = vertical_gate(150.0, 30.0, 2.0, k);
  CHECK_THROWS_AS(plan_divert(c, Vec3::Zero(), g, 40.0, 150.0, 100.0), DomainError);
  CHECK_NOTHROW(plan_divert(c, Vec3::Zero(), g, 40.0, 100.0, 100.0));
}

TEST_CASE("powered descent from the published pitch-up gate") {
  const MissionConfig cfg;
  const MissionDesign d = published_design(cfg.moon);
  const PoweredDescentSpec spec = powered_descent_spec(d, DivertScenario{"N", 0.0, 0.0}, cfg);
  const PoweredDescentResult r = fly_powered_descent(spec, cfg.engine, cfg.moon);
  REQUIRE(r.lga.has_value());
  CHECK(r.lga->altitude == doctest::Approx(500.0).epsilon(1e-6));
  CHECK(altitude(r.vga, cfg.moon) == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(r.vga.v_r == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(r.vga.v_theta) < 1e-6);
  CHECK(std::abs(downrange(r.vga, cfg.moon)) < 1e-3);
  // centre engine off after the low gate, outer pair continuous across it
  bool after = false;
  for (const TrajectorySample& s : r.trajectory.samples) {
    if (s.state.t > r.lga->state.t + 1e-9) after = true;
    if (after) CHECK(s.cmd.t2 == 0.0);
    CHECK(s.cmd.u.norm() == doctest::Approx(1.0));
    CHECK(s.state.phi == 0.0);
  }
  // mass bookkeeping
  CHECK(r.metrics.propellant ==
        doctest::Approx(r.trajectory.front().state.m - r.trajectory.back().state.m).epsilon(1e-12));
}

TEST_CASE("diverts land on the shifted gate") {
  const MissionConfig cfg;
  const MissionDesign d = published_design(cfg.moon);
  for (const DivertScenario& sc : standard_scenarios()) {
    const PoweredDescentSpec spec = powered_descent_spec(d, sc, cfg);
    const PoweredDescentResult r = fly_powered_descent(spec, cfg.engine, cfg.moon);
    CHECK(downrange(r.vga, cfg.moon) == doctest::Approx(sc.hda1_shift + sc.hda2_shift).epsilon(1e-6));
    CHECK(r.laws.size() == (sc.hda2_shift != 0.0 ? 3u : 2u));
    CHECK(r.hda2.has_value());
  }
}

TEST_CASE("time-of-flight sweep: longer descents throttle more gently") {
  const MissionConfig cfg;
  const PoweredDescentSpec base = powered_descent_spec(published_design(cfg.moon), DivertScenario{}, cfg);
  const auto rows = sweep_tof(
      [&](double tf) {
        PoweredDescentSpec s = base;
        s.tf = tf;
        return s;
      },
      {38.0, 43.05, 50.0, 60.0}, cfg.engine, cfg.moon);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.error.empty());
  CHECK(rows[3].metrics.max_t1_rate < rows[0].metrics.max_t1_rate);
  CHECK(rows[3].metrics.propellant > rows[0].metrics.propellant);
  for (const auto& r : rows)
    CHECK(r.feasible == within_limits(r.metrics, cfg.engine, DescentLimits{}));
}
