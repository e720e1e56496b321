// Minimum-time powered flight over a flat planet in uniform gravity: the
// bilinear tangent law solved as a six-unknown root-finding problem.
#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "ldg/moon.hpp"
#include "ldg/newton.hpp"

namespace ldg {

/// x downrange (free at the end), y lateral, z up.
struct FlatPegProblem {
  Vec3 g{0.0, 0.0, -1.62};  ///< [m/s^2]
  double thrust = 18000.0;  ///< [N]
  double mass_flow = 0.0;   ///< [kg/s], constant
  double m0 = 7000.0;       ///< [kg]
  double dry_mass = 0.0;    ///< burnout floor [kg]
  Vec3 r0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  double y_f = 0.0;
  double z_f = 0.0;
  Vec3 v_f = Vec3::Zero();

  double mass(double t) const { return m0 - mass_flow * t; }
  double gamma(double t) const { return thrust / mass(t); }
  double burnout_time() const { return (m0 - dry_mass) / mass_flow; }
};

struct FlatPegSolution {
  double tf = 0.0;
  Vec3 b = Vec3::Zero();
  Vec3 c = Vec3::Zero();  ///< c.x() == 0
  double residual_norm = 0.0;
  NewtonReport report;

  Vec3 primer(double t) const { return c * t + b; }
  /// Unit thrust direction; zero where the primer vanishes.
  Vec3 direction(double t) const;
};

struct FlatPegOptions {
  NewtonOptions newton;
  double quadrature_tolerance = 1e-13;
  double scale_length = 1e4;
  double scale_velocity = 1e2;
};

struct FlatPegState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

/// Position and velocity at t under the law (b, c), by adaptive quadrature.
FlatPegState flat_peg_state(const FlatPegProblem& p, const Vec3& b, const Vec3& c, double t, double tolerance = 1e-13);

/// Unknowns y = [tf, b_x, b_y, b_z, c_y, c_z]; residual = scaled (y, z, v) misses and H(tf) - 1.
Eigen::VectorXd flat_peg_residual(const FlatPegProblem& p, const Eigen::VectorXd& y, const FlatPegOptions& options);

/// Throws UnreachableError when the velocity change exceeds the propellant
/// available above the dry mass, ConvergenceError on Newton failure.
FlatPegSolution solve_flat_peg(const FlatPegProblem& p, const FlatPegOptions& options = {});

/// psi_r . v + psi_v . (g + gamma u) at time t.
double flat_peg_hamiltonian(const FlatPegProblem& p, const FlatPegSolution& s, double t, double tolerance = 1e-13);

/// Hamiltonian including the mass co-state term; constant along an extremal.
double flat_peg_augmented_hamiltonian(const FlatPegProblem& p, const FlatPegSolution& s, double t,
                                      double tolerance = 1e-13);

/// gamma (psi_v . u - psi_v . w): non-negative when u maximises the Hamiltonian.
double pmp_margin(const FlatPegProblem& p, const FlatPegSolution& s, double t, const Vec3& w);

struct PmpReport {
  int checks = 0;
  int passed = 0;
  double min_margin = 0.0;
};

/// Random unit-direction perturbations at evenly spaced interior times.
PmpReport verify_pmp_optimality(const FlatPegSolution& s, const FlatPegProblem& p, int n_perturbations,
                                int n_times = 10, std::uint64_t seed = 7);

/// Lunar braking-like demonstration problem.
FlatPegProblem flat_peg_demo();

}  // namespace ldg
