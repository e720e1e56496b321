#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ldg/braking_burn.hpp"
#include "ldg/errors.hpp"
#include "ldg/peg_flat.hpp"
#include "ldg/propagator.hpp"

using namespace ldg;

namespace {

const FlatPegProblem& demo() {
  static const FlatPegProblem p = flat_peg_demo();
  return p;
}

const FlatPegSolution& demo_solution() {
  static const FlatPegSolution s = solve_flat_peg(demo());
  return s;
}

// Independent RK4 flight of the solved steering in uniform gravity.
FlatPegState fly(const FlatPegProblem& p, const FlatPegSolution& s, int steps) {
  Vec3 r = p.r0, v = p.v0;
  const double h = s.tf / steps;
  auto acc = [&](double t) { return p.g + p.gamma(t) * s.direction(t); };
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Vec3 k1v = acc(t), k1r = v;
    const Vec3 k2v = acc(t + h / 2), k2r = v + h / 2 * k1v;
    const Vec3 k3v = k2v, k3r = v + h / 2 * k2v;
    const Vec3 k4v = acc(t + h), k4r = v + h * k3v;
    r += h / 6 * (k1r + 2 * k2r + 2 * k3r + k4r);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {r, v};
}

}  // namespace

TEST_CASE("demo converges with a tight residual") {
  const FlatPegSolution& s = demo_solution();
  CHECK(s.residual_norm < 1e-8);
  CHECK(s.report.iterations <= 10);
  CHECK(s.tf > 0.0);
  CHECK(s.tf < demo().burnout_time());
  CHECK(s.c.x() == 0.0);
}

TEST_CASE("independent flight of the solved steering meets the terminal conditions") {
  const FlatPegState end = fly(demo(), demo_solution(), 20000);
  CHECK(std::abs(end.r.y() - demo().y_f) < 1e-3);
  CHECK(std::abs(end.r.z() - demo().z_f) < 1e-3);
  CHECK((end.v - demo().v_f).norm() < 1e-5);
  const FlatPegState q = flat_peg_state(demo(), demo_solution().b, demo_solution().c, demo_solution().tf);
  CHECK((q.r - end.r).norm() < 1e-3);
}

TEST_CASE("Hamiltonian with the mass co-state is constant and equal to one") {
  const FlatPegSolution& s = demo_solution();
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 40; ++i) {
    const double h = flat_peg_augmented_hamiltonian(demo(), s, s.tf * i / 40.0);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  CHECK((hi - lo) / std::abs(hi) < 1e-6);
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(flat_peg_hamiltonian(demo(), s, s.tf) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("steering maximises the Hamiltonian against random directions") {
  const PmpReport r = verify_pmp_optimality(demo_solution(), demo(), 10, 10);
  CHECK(r.checks == 100);
  CHECK(r.passed == 100);
  CHECK(r.min_margin >= 0.0);
}

TEST_CASE("steering is unit and planar for a planar problem") {
  const FlatPegSolution& s = demo_solution();
  CHECK(s.b.y() == doctest::Approx(0.0));
  for (int i = 0; i <= 20; ++i) {
    const Vec3 u = s.direction(s.tf * i / 20.0);
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(u.y()) < 1e-12);
  }
}

TEST_CASE("vertical ascent from rest flips thrust at the switch") {
  FlatPegProblem p = demo();
  p.r0 = Vec3::Zero();
  p.v0 = Vec3::Zero();
  p.z_f = 1000.0;
  p.v_f = Vec3::Zero();
  const FlatPegSolution s = solve_flat_peg(p);
  CHECK(s.residual_norm < 1e-8);
  CHECK(s.direction(0.1 * s.tf).z() > 0.99);
  CHECK(s.direction(0.9 * s.tf).z() < -0.99);
  const FlatPegState end = fly(p, s, 40000);
  CHECK(std::abs(end.r.z() - 1000.0) < 0.05);
}

TEST_CASE("impossible velocity change is unreachable") {
  FlatPegProblem p = demo();
  p.dry_mass = 6500.0;
  CHECK_THROWS_AS(solve_flat_peg(p), UnreachableError);
}

TEST_CASE("spherical braking solver agrees with the flat solution in a uniform field") {
  const FlatPegProblem& p = demo();
  const FlatPegSolution& s = demo_solution();
  const MoonConstants k = MoonConstants::uniform_field(-p.g.z());
  EngineModel e;
  BrakingTarget target;
  target.z0.r = k.r_moon + p.r0.z();
  target.z0.v_theta = p.v0.x();
  target.z0.v_r = p.v0.z();
  target.z0.m = p.m0;
  target.x_f.r = k.r_moon + p.z_f;
  target.x_f.theta = std::numbers::pi / 2;
  target.x_f.v_r = p.v_f.z();
  target.x_f.v_theta = p.v_f.x();
  BrakingOptions opt;
  opt.thrust = p.thrust;
  opt.step = 0.05;
  const BrakingSolution b = solve_braking_5(target, e, k, opt);
  CHECK(b.law.dt == doctest::Approx(s.tf).epsilon(1e-4));
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = s.tf * i / 100.0;
    const Vec3 flat = s.direction(t);
    const Vec3 local = b.law.direction(b.law.t0 + t);
    worst = std::max(worst, angle_between(Vec3(flat.z(), flat.y(), flat.x()), local));
  }
  CHECK(worst * 180.0 / std::numbers::pi < 0.1);
}
