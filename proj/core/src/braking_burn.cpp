#include "ldg/braking_burn.hpp"

#include <cmath>

#include "ldg/errors.hpp"
#include "ldg/propagator.hpp"

namespace ldg {

namespace {

// Intermediate shooting iterates may pass below the surface; only the
// converged arc has to be physical.
constexpr double kShootingMargin = 5.0e5;

double resolve_thrust(const BrakingOptions& o, const EngineModel& e) { return o.thrust > 0.0 ? o.thrust : e.total_max(); }

Eigen::VectorXd typical5() {
  Eigen::VectorXd t(5);
  t << 100.0, 1e-4, 1e-4, 1e-2, 1e-2;
  return t;
}

Steering law_steering(const BilinearLaw& law, const EngineModel& engine) {
  return [law, &engine](double t, const SphericalState&) { return braking_command(law, t, engine); };
}

}  // namespace

Vec3 BilinearLaw::direction(double t) const {
  const Vec3 v = c * (t - t0) + b;
  const double n = v.norm();
  if (!(n > 0.0)) throw DomainError("bilinear law direction vanishes");
  return v / n;
}

BilinearLaw BilinearLaw::rebased(double new_t0) const {
  BilinearLaw out = *this;
  out.b = b + c * (new_t0 - t0);
  out.dt = dt - (new_t0 - t0);
  out.t0 = new_t0;
  return out;
}

ThrustCommand braking_command(const BilinearLaw& law, double t, const EngineModel& engine) {
  ThrustCommand cmd;
  cmd.t1 = law.thrust * engine.outer_share();
  cmd.t2 = law.thrust - cmd.t1;
  cmd.u = law.direction(t);
  return cmd;
}

double tsiolkovsky_dt_guess(double m0, double thrust, double isp, const Vec3& v0, const Vec3& vf, double g0) {
  if (!(thrust > 0.0)) throw DomainError("tsiolkovsky_dt_guess: thrust must be positive");
  const double ve = isp * g0;
  return m0 * ve / thrust * (1.0 - std::exp(-(vf - v0).norm() / ve));
}

BilinearLaw tangent_guess(const BrakingTarget& target, const EngineModel& engine, const MoonConstants& k,
                          double thrust) {
  BilinearLaw law;
  law.t0 = target.z0.t;
  law.thrust = thrust;
  const Vec3 v0{target.z0.v_r, target.z0.v_phi, target.z0.v_theta};
  const Vec3 vf{target.x_f.v_r, target.x_f.v_phi, target.x_f.v_theta};
  law.dt = tsiolkovsky_dt_guess(target.z0.m, thrust, engine.isp, v0, vf, k.g0);
  return law;
}

BilinearLaw law_from_params5(const Eigen::VectorXd& y, double t0, double thrust) {
  BilinearLaw law;
  law.t0 = t0;
  law.dt = y[0];
  law.c = Vec3{y[2], y[1], 0.0};
  law.b = Vec3{y[4], y[3], -1.0};
  law.thrust = thrust;
  return law;
}

Eigen::VectorXd params5_from_law(const BilinearLaw& law) {
  // Normalise to b_theta = -1 (positive scaling leaves the steering unchanged).
  const double s = -1.0 / law.b.z();
  Eigen::VectorXd y(5);
  y << law.dt, s * law.c.y(), s * law.c.x(), s * law.b.y(), s * law.b.x();
  return y;
}

Eigen::VectorXd braking5_residual(const BrakingTarget& target, const EngineModel& engine, const MoonConstants& k,
                                  const BrakingOptions& options, const Eigen::VectorXd& y) {
  const double thrust = resolve_thrust(options, engine);
  if (!(y[0] > 0.0)) throw DomainError("braking burn duration must be positive");
  const BilinearLaw law = law_from_params5(y, target.z0.t, thrust);

  SphericalState end = target.x_f;
  end.t = law.t_end();
  end.m = mass_linear(target.z0.m, thrust, engine.isp, law.dt, k.g0);

  PropagationOptions po;
  po.step = options.step;
  po.direction = Direction::backward;
  po.record = false;
  po.impact_margin = kShootingMargin;
  const PropagationResult res = propagate(end, law_steering(law, engine), law.dt, po, engine, k);
  const SphericalState& s = res.final_state;
  const SphericalState& z = target.z0;

  Eigen::VectorXd r(5);
  r << (s.r - z.r) / options.scale_length, (s.phi - z.phi) / options.scale_angle,
      (s.v_r - z.v_r) / options.scale_velocity, (s.v_phi - z.v_phi) / options.scale_velocity,
      (s.v_theta - z.v_theta) / options.scale_velocity;
  return r;
}

BrakingSolution solve_braking_5(const BrakingTarget& target, const EngineModel& engine, const MoonConstants& k,
                                const BrakingOptions& options, const std::optional<BilinearLaw>& guess) {
  if (!(target.x_f.r < target.z0.r)) throw DomainError("braking target must lie below the initial state");
  const double thrust = resolve_thrust(options, engine);

  const Eigen::VectorXd y0 = guess ? params5_from_law(*guess) : params5_from_law(tangent_guess(target, engine, k, thrust));
  const ResidualFn f = [&](const Eigen::VectorXd& y) { return braking5_residual(target, engine, k, options, y); };
  NewtonResult nr = solve_newton(f, y0, typical5(), options.newton);

  BrakingSolution sol;
  sol.law = law_from_params5(nr.y, target.z0.t, thrust);
  sol.report = std::move(nr.report);

  // Recover the full initial state (theta0 in particular).
  SphericalState end = target.x_f;
  end.t = sol.law.t_end();
  end.m = mass_linear(target.z0.m, thrust, engine.isp, sol.law.dt, k.g0);
  PropagationOptions po;
  po.step = options.step;
  po.direction = Direction::backward;
  po.record = false;
  po.impact_margin = kShootingMargin;
  const PropagationResult back = propagate(end, law_steering(sol.law, engine), sol.law.dt, po, engine, k);
  sol.initial = target.z0;
  sol.initial.theta = back.final_state.theta;
  sol.theta0 = back.final_state.theta;
  return sol;
}

Eigen::VectorXd braking6_residual(const SphericalState& initial, const SphericalState& x_f, const EngineModel& engine,
                                  const MoonConstants& k, const BrakingOptions& options, const Eigen::VectorXd& y) {
  if (!(y[0] > 0.0)) throw DomainError("braking burn duration must be positive");
  if (!(y[5] > 0.0)) throw DomainError("braking thrust must be positive");
  const BilinearLaw law = law_from_params5(y.head<5>(), initial.t, y[5]);
  mass_linear(initial.m, law.thrust, engine.isp, law.dt, k.g0);

  PropagationOptions po;
  po.step = options.step;
  po.record = false;
  po.impact_margin = kShootingMargin;
  const PropagationResult res = propagate(initial, law_steering(law, engine), law.dt, po, engine, k);
  const SphericalState& s = res.final_state;

  Eigen::VectorXd r(6);
  r << (s.r - x_f.r) / options.scale_length, (s.phi - x_f.phi) / options.scale_angle,
      (s.theta - x_f.theta) / options.scale_angle, (s.v_r - x_f.v_r) / options.scale_velocity,
      (s.v_phi - x_f.v_phi) / options.scale_velocity, (s.v_theta - x_f.v_theta) / options.scale_velocity;
  return r;
}

BrakingSolution solve_braking_6(const SphericalState& initial, const SphericalState& x_f, const EngineModel& engine,
                                const MoonConstants& k, const BrakingOptions& options,
                                const std::optional<BilinearLaw>& guess) {
  BilinearLaw start;
  if (guess) {
    start = guess->rebased(initial.t);
  } else {
    BrakingTarget t{x_f, initial, initial.theta};
    start = tangent_guess(t, engine, k, resolve_thrust(options, engine));
  }
  if (!(start.dt > 0.0)) throw DomainError("solve_braking_6: no time left on the guess law");

  Eigen::VectorXd y0(6);
  y0 << params5_from_law(start), start.thrust;
  Eigen::VectorXd typical(6);
  typical << typical5(), 1e3;

  const ResidualFn f = [&](const Eigen::VectorXd& y) { return braking6_residual(initial, x_f, engine, k, options, y); };
  NewtonResult nr = solve_newton(f, y0, typical, options.newton);

  const double thrust = nr.y[5];
  const double slack = 1e-6 * engine.total_max();
  if (thrust > engine.total_max() + slack || thrust < engine.total_min() - slack) {
    throw UnreachableError("required thrust " + std::to_string(thrust) + " N is outside [" +
                               std::to_string(engine.total_min()) + ", " + std::to_string(engine.total_max()) +
                               "] N: initial along-track angle is outside the reachable envelope",
                           thrust);
  }

  BrakingSolution sol;
  sol.law = law_from_params5(nr.y.head<5>(), initial.t, thrust);
  sol.initial = initial;
  sol.theta0 = initial.theta;
  sol.report = std::move(nr.report);
  return sol;
}

std::vector<ThrustSweepPoint> sweep_thrust_theta0(const BrakingTarget& target, const EngineModel& engine,
                                                  const MoonConstants& k, const std::vector<double>& thrusts,
                                                  const BrakingOptions& options) {
  std::vector<ThrustSweepPoint> out;
  out.reserve(thrusts.size());
  std::optional<BilinearLaw> warm;
  for (double thrust : thrusts) {
    ThrustSweepPoint p;
    p.thrust = thrust;
    BrakingOptions o = options;
    o.thrust = thrust;
    try {
      std::optional<BilinearLaw> guess = warm;
      if (guess) guess->thrust = thrust;
      const BrakingSolution sol = solve_braking_5(target, engine, k, o, guess);
      p.theta0 = sol.theta0;
      p.dt = sol.law.dt;
      p.iterations = sol.report.iterations;
      p.converged = true;
      warm = sol.law;
    } catch (const Error& e) {
      p.error = e.what();
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace ldg
