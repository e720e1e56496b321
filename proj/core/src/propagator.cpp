#include "ldg/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

StateVector rk4_step(const std::function<StateVector(double, const StateVector&)>& f, double t,
                     const StateVector& x, double h) {
  const StateVector k1 = f(t, x);
  const StateVector k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
  const StateVector k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
  const StateVector k4 = f(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool crosses(double before, double after, Crossing dir) {
  const bool rising = before < 0.0 && after >= 0.0;
  const bool falling = before > 0.0 && after <= 0.0;
  switch (dir) {
    case Crossing::rising: return rising;
    case Crossing::falling: return falling;
    case Crossing::either: return rising || falling;
  }
  return false;
}

// Representation-independent view of one propagation problem.
struct Problem {
  std::function<StateVector(double, const StateVector&)> deriv;
  // Spherical state and command at a point, for events and recording.
  std::function<std::pair<SphericalState, ThrustCommand>(double, const StateVector&)> observe;
  std::function<double(const StateVector&)> radius;
};

double event_value(const EventSpec& e, const SphericalState& s, const ThrustCommand& cmd, const MoonConstants& k) {
  switch (e.kind) {
    case EventKind::time_reached: return s.t - e.target;
    case EventKind::altitude_crossing: return (s.r - k.r_moon) - e.target;
    case EventKind::pitch_angle_reached: return pitch_angle(cmd.u) - e.target;
    case EventKind::theta_crossing: return s.theta - e.target;
  }
  return 0.0;
}

PropagationResult run(const Problem& p, const StateVector& x0, double t0, double span,
                      const PropagationOptions& opt, const MoonConstants& k) {
  if (!(opt.step > 0.0)) throw DomainError("propagate: step must be positive");
  if (!(span >= 0.0) || !std::isfinite(span)) throw DomainError("propagate: span must be finite and >= 0");
  for (const auto& e : opt.events) {
    if (!std::isfinite(e.target) || !(e.tolerance > 0.0)) throw DomainError("propagate: malformed event");
  }

  const double sign = opt.direction == Direction::forward ? 1.0 : -1.0;
  const auto n_steps = static_cast<long>(std::max(1.0, std::ceil(span / opt.step - 1e-9)));
  const double h = sign * span / static_cast<double>(n_steps);
  const double floor_r = k.r_moon - opt.impact_margin;

  PropagationResult out;
  auto record = [&](double t, const StateVector& x) {
    if (!opt.record) return;
    auto [s, cmd] = p.observe(t, x);
    TrajectorySample sample;
    sample.state = s;
    sample.cmd = cmd;
    out.trajectory.samples.push_back(sample);
  };

  StateVector x = x0;
  double t = t0;
  std::vector<double> g_prev(opt.events.size());
  {
    auto [s, cmd] = p.observe(t, x);
    for (std::size_t i = 0; i < opt.events.size(); ++i) g_prev[i] = event_value(opt.events[i], s, cmd, k);
  }
  record(t, x);

  if (span == 0.0) {
    auto [s, cmd] = p.observe(t, x);
    out.final_state = s;
    out.final_cmd = cmd;
    out.final_cartesian = cartesian_from_vector(t, x);
    return out;
  }

  for (long step = 0; step < n_steps; ++step) {
    const double t_next = (step + 1 == n_steps) ? t0 + sign * span : t + h;
    const double hs = t_next - t;
    StateVector x_next = rk4_step(p.deriv, t, x, hs);

    // Earliest event within this step.
    std::optional<std::size_t> hit;
    double hit_tau = 0.0;
    StateVector hit_x;
    std::vector<double> g_next(opt.events.size());
    if (!opt.events.empty()) {
      auto [s_next, cmd_next] = p.observe(t_next, x_next);
      for (std::size_t i = 0; i < opt.events.size(); ++i) g_next[i] = event_value(opt.events[i], s_next, cmd_next, k);
    }
    for (std::size_t i = 0; i < opt.events.size(); ++i) {
      const EventSpec& e = opt.events[i];
      if (!crosses(g_prev[i], g_next[i], e.direction)) continue;
      double lo = 0.0, hi = hs;
      StateVector x_hi = x_next;
      while (std::abs(hi - lo) > e.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const StateVector xm = rk4_step(p.deriv, t, x, mid);
        auto [sm, cm] = p.observe(t + mid, xm);
        if (crosses(g_prev[i], event_value(e, sm, cm, k), e.direction)) {
          hi = mid;
          x_hi = xm;
        } else {
          lo = mid;
        }
      }
      if (!hit || std::abs(hi) < std::abs(hit_tau)) {
        hit = i;
        hit_tau = hi;
        hit_x = x_hi;
      }
    }

    if (hit) {
      t += hit_tau;
      x = hit_x;
      record(t, x);
      out.event = hit;
      break;
    }

    if (p.radius(x_next) < floor_r) {
      throw ImpactError("propagate: below-surface guard breached at t = " + std::to_string(t_next), t_next);
    }
    t = t_next;
    x = x_next;
    g_prev = std::move(g_next);
    record(t, x);
  }

  auto [s_end, cmd_end] = p.observe(t, x);
  out.final_state = s_end;
  out.final_cmd = cmd_end;
  out.final_cartesian = cartesian_from_vector(t, x);
  if (opt.direction == Direction::backward) {
    std::reverse(out.trajectory.samples.begin(), out.trajectory.samples.end());
  }
  out.trajectory.refresh_derived(k);
  return out;
}

}  // namespace

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

void Trajectory::append(const Trajectory& other) {
  auto first = other.samples.begin();
  if (!samples.empty() && first != other.samples.end() && first->state.t <= samples.back().state.t) ++first;
  samples.insert(samples.end(), first, other.samples.end());
}

void Trajectory::refresh_derived(const MoonConstants& k) {
  Vec3 prev_dir = Vec3::Zero();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    TrajectorySample& s = samples[i];
    s.altitude = altitude(s.state, k);
    s.downrange = downrange(s.state, k);
    s.pitch_deg = pitch_angle(s.cmd.u) * kRadToDeg;
    const Vec3 dir = local_frame(s.state.phi, s.state.theta).to_inertial(s.cmd.u).normalized();
    if (i == 0) {
      s.pitch_rate_dps = 0.0;
    } else {
      const double dt = s.state.t - samples[i - 1].state.t;
      s.pitch_rate_dps = dt > 0.0 ? angle_between(prev_dir, dir) / dt * kRadToDeg : 0.0;
    }
    prev_dir = dir;
  }
  if (samples.size() > 1) samples[0].pitch_rate_dps = samples[1].pitch_rate_dps;
}

SphericalState Trajectory::state_at(double t) const {
  if (samples.empty()) throw DomainError("state_at: empty trajectory");
  if (t <= samples.front().state.t) return samples.front().state;
  if (t >= samples.back().state.t) return samples.back().state;
  const auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const TrajectorySample& s, double v) { return s.state.t < v; });
  const SphericalState& b = it->state;
  const SphericalState& a = std::prev(it)->state;
  const double w = (t - a.t) / (b.t - a.t);
  const StateVector x = (1.0 - w) * to_vector(a) + w * to_vector(b);
  return spherical_from_vector(t, x);
}

ThrustCommand command_from_total_accel(const CartesianState& s, const Vec3& total_accel, const MoonConstants& k) {
  const Vec3 f = s.m * (total_accel - gravity_accel(s.position, k));
  const double thrust = f.norm();
  ThrustCommand cmd;
  cmd.t1 = thrust;
  cmd.u = thrust > 0.0 ? local_frame(s.position).to_local(f / thrust) : Vec3{1.0, 0.0, 0.0};
  return cmd;
}

PropagationResult propagate(const SphericalState& x0, const Steering& steering, double span,
                            const PropagationOptions& options, const EngineModel& engine, const MoonConstants& k) {
  // an empty steering function coasts
  const Steering steer = steering ? steering : Steering([](double, const SphericalState&) {
    ThrustCommand c;
    c.t1 = 0.0;
    return c;
  });
  Problem p;
  p.deriv = [&](double t, const StateVector& x) {
    const SphericalState s = spherical_from_vector(t, x);
    return eom_spherical(s, steer(t, s), engine, k);
  };
  p.observe = [&](double t, const StateVector& x) {
    const SphericalState s = spherical_from_vector(t, x);
    return std::make_pair(s, steer(t, s));
  };
  p.radius = [](const StateVector& x) { return x[0]; };
  return run(p, to_vector(x0), x0.t, span, options, k);
}

PropagationResult propagate_cartesian(const CartesianState& x0, const AccelSteering& steering, AccelMode mode,
                                      double span, const PropagationOptions& options, const EngineModel& engine,
                                      const MoonConstants& k, const ThrustSplit& split) {
  Problem p;
  p.deriv = [&](double t, const StateVector& x) {
    const CartesianState c = cartesian_from_vector(t, x);
    return eom_cartesian(c, steering(t, c), mode, engine, k);
  };
  p.observe = [&](double t, const StateVector& x) {
    const CartesianState c = cartesian_from_vector(t, x);
    const Vec3 a = steering(t, c);
    const Vec3 total = mode == AccelMode::total ? a : Vec3(a + gravity_accel(c.position, k));
    ThrustCommand cmd = command_from_total_accel(c, total, k);
    if (split) cmd = split(t, cmd.t1, cmd.u);
    return std::make_pair(cartesian_to_spherical(c), cmd);
  };
  p.radius = [](const StateVector& x) { return x.head<3>().norm(); };
  return run(p, to_vector(x0), x0.t, span, options, k);
}

}  // namespace ldg
