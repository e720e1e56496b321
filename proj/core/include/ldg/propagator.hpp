// Fixed-step RK4 propagation with event-based termination.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldg/dynamics.hpp"
#include "ldg/moon.hpp"

namespace ldg {

enum class EventKind { time_reached, altitude_crossing, pitch_angle_reached, theta_crossing };

/// Sign change of (value - target), measured along the direction of integration.
enum class Crossing { either, rising, falling };

struct EventSpec {
  EventKind kind = EventKind::time_reached;
  double target = 0.0;  ///< [s], [m] or [rad] depending on kind
  Crossing direction = Crossing::either;
  double tolerance = 1e-6;  ///< bisection bracket on time [s]

  static EventSpec time(double t) { return {EventKind::time_reached, t, Crossing::either}; }
  static EventSpec altitude(double h, Crossing dir = Crossing::falling) {
    return {EventKind::altitude_crossing, h, dir};
  }
  static EventSpec pitch(double rad, Crossing dir = Crossing::either) {
    return {EventKind::pitch_angle_reached, rad, dir};
  }
  static EventSpec theta(double rad, Crossing dir = Crossing::either) {
    return {EventKind::theta_crossing, rad, dir};
  }
};

struct TrajectorySample {
  SphericalState state;
  ThrustCommand cmd;
  double altitude = 0.0;        ///< [m]
  double downrange = 0.0;       ///< [m]
  double pitch_deg = 0.0;       ///< thrust elevation above local horizontal
  double pitch_rate_dps = 0.0;  ///< angular rate of the inertial thrust direction
};

/// Time-ordered samples.  Samples are always stored with increasing time,
/// whatever the integration direction.
class Trajectory {
 public:
  std::vector<TrajectorySample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }

  /// Appends `other`, dropping its first sample when it duplicates our last time.
  void append(const Trajectory& other);

  /// Recomputes altitude, downrange, pitch and pitch rate for every sample.
  void refresh_derived(const MoonConstants& constants);

  /// Linear interpolation of the state at time t (clamped to the span).
  SphericalState state_at(double t) const;
};

using Steering = std::function<ThrustCommand(double t, const SphericalState&)>;
using AccelSteering = std::function<Vec3(double t, const CartesianState&)>;
/// Splits a total thrust along a local direction into outer/centre engine commands.
using ThrustSplit = std::function<ThrustCommand(double t, double total_thrust, const Vec3& u_local)>;

enum class Direction { forward, backward };

struct PropagationOptions {
  double step = 0.1;  ///< nominal step [s]; the span is divided into equal steps no longer than this
  Direction direction = Direction::forward;
  std::vector<EventSpec> events;
  bool record = true;
  double impact_margin = 100.0;  ///< below-surface guard [m]
};

struct PropagationResult {
  Trajectory trajectory;                ///< empty unless options.record
  std::optional<std::size_t> event;     ///< index into options.events of the terminating event
  SphericalState final_state;
  ThrustCommand final_cmd;
  CartesianState final_cartesian;       ///< filled by propagate_cartesian only
};

/// Integrates the spherical equations of motion over `span` seconds (> 0)
/// from x0 in the requested direction.  Terminates at the first event.  An
/// empty steering function coasts.
/// Throws ImpactError when the below-surface guard is breached first.
PropagationResult propagate(const SphericalState& x0, const Steering& steering, double span,
                            const PropagationOptions& options, const EngineModel& engine,
                            const MoonConstants& constants);

/// Cartesian variant.  In AccelMode::total the steering supplies r'' directly.
/// Recorded commands come from `split`, which defaults to putting all thrust on t1.
PropagationResult propagate_cartesian(const CartesianState& x0, const AccelSteering& steering, AccelMode mode,
                                      double span, const PropagationOptions& options, const EngineModel& engine,
                                      const MoonConstants& constants, const ThrustSplit& split = {});

/// Thrust magnitude and local direction that realise a total acceleration at a state.
ThrustCommand command_from_total_accel(const CartesianState& s, const Vec3& total_accel, const MoonConstants& k);

/// Angle between two directions, robust near 0 and pi [rad].
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace ldg
