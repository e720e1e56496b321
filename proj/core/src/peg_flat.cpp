#include "ldg/peg_flat.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

Vec3 unit_or_zero(const Vec3& v) {
  const double n = v.norm();
  return n > 0.0 ? Vec3(v / n) : Vec3::Zero();
}

/// Breakpoints of [0, t] at the primer minimum, where the direction turns fastest.
std::vector<double> breakpoints(const Vec3& b, const Vec3& c, double t0, double t1) {
  std::vector<double> pts{t0};
  const double cc = c.squaredNorm();
  if (cc > 0.0) {
    const double ts = -c.dot(b) / cc;
    if (ts > t0 && ts < t1) pts.push_back(ts);
  }
  pts.push_back(t1);
  return pts;
}

template <typename F>
double integrate(const F& f, const std::vector<double>& pts, double tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) sum += GK::integrate(f, pts[i], pts[i + 1], 15, tol);
  }
  return sum;
}

FlatPegSolution unpack(const Eigen::VectorXd& y) {
  FlatPegSolution s;
  s.tf = y[0];
  s.b = Vec3(y[1], y[2], y[3]);
  s.c = Vec3(0.0, y[4], y[5]);
  return s;
}

double tsiolkovsky_time(const FlatPegProblem& p, double dv, double g0_isp) {
  return p.m0 / p.mass_flow * (1.0 - std::exp(-dv / g0_isp));
}

}  // namespace

Vec3 FlatPegSolution::direction(double t) const { return unit_or_zero(primer(t)); }

FlatPegState flat_peg_state(const FlatPegProblem& p, const Vec3& b, const Vec3& c, double t, double tol) {
  const std::vector<double> pts = breakpoints(b, c, 0.0, t);
  FlatPegState s;
  for (int i = 0; i < 3; ++i) {
    const auto dv = [&](double tau) { return p.gamma(tau) * unit_or_zero(c * tau + b)[i]; };
    const auto dr = [&](double tau) { return (t - tau) * p.gamma(tau) * unit_or_zero(c * tau + b)[i]; };
    s.v[i] = p.v0[i] + p.g[i] * t + integrate(dv, pts, tol);
    s.r[i] = p.r0[i] + p.v0[i] * t + 0.5 * p.g[i] * t * t + integrate(dr, pts, tol);
  }
  return s;
}

Eigen::VectorXd flat_peg_residual(const FlatPegProblem& p, const Eigen::VectorXd& y, const FlatPegOptions& o) {
  const FlatPegSolution s = unpack(y);
  if (!(s.tf > 0.0)) throw DomainError("flat PEG: non-positive time of flight");
  if (s.tf >= p.burnout_time()) throw InfeasibleBurnError("flat PEG: burn reaches the dry mass");
  const FlatPegState st = flat_peg_state(p, s.b, s.c, s.tf, o.quadrature_tolerance);
  const Vec3 pv = s.primer(s.tf);
  const double h = -s.c.dot(st.v) + pv.dot(p.g) + p.gamma(s.tf) * pv.norm();
  Eigen::VectorXd r(6);
  r << (st.r.y() - p.y_f) / o.scale_length, (st.r.z() - p.z_f) / o.scale_length,
      (st.v.x() - p.v_f.x()) / o.scale_velocity, (st.v.y() - p.v_f.y()) / o.scale_velocity,
      (st.v.z() - p.v_f.z()) / o.scale_velocity, h - 1.0;
  return r;
}

FlatPegSolution solve_flat_peg(const FlatPegProblem& p, const FlatPegOptions& o) {
  if (!(p.thrust > 0.0) || !(p.mass_flow > 0.0) || !(p.m0 > p.dry_mass)) {
    throw DomainError("flat PEG: thrust, mass flow and mass must be positive");
  }
  const double ve = p.thrust / p.mass_flow;  // effective exhaust speed
  const Vec3 dv = p.v_f - p.v0;
  if (p.dry_mass > 0.0 && dv.norm() >= ve * std::log(p.m0 / p.dry_mass)) {
    throw UnreachableError("flat PEG: velocity change exceeds the available propellant", p.thrust);
  }

  // Gravity-turn-like start: b along the required velocity change, c = 0.
  const Vec3 dr(0.0, p.y_f - p.r0.y(), p.z_f - p.r0.z());
  const double t_geom = 2.0 * std::sqrt(dr.norm() / p.gamma(0.0));
  double tf = std::max(tsiolkovsky_time(p, dv.norm(), ve), t_geom);
  for (int i = 0; i < 5; ++i) tf = std::max(tsiolkovsky_time(p, (dv - p.g * tf).norm(), ve), t_geom);
  tf = std::min(tf, 0.95 * p.burnout_time());
  Vec3 bhat = unit_or_zero(dv - p.g * tf);
  if (bhat.isZero()) bhat = -unit_or_zero(p.g);
  const double denom = p.gamma(tf) + p.g.dot(bhat);
  const Vec3 b = bhat / (denom > 0.0 ? denom : p.gamma(tf));

  const double bn = b.norm();
  Eigen::VectorXd typical(6);
  typical << std::max(tf, 1.0), bn, bn, bn, bn / std::max(tf, 1.0), bn / std::max(tf, 1.0);
  const ResidualFn f = [&](const Eigen::VectorXd& y) { return flat_peg_residual(p, y, o); };

  std::vector<Eigen::VectorXd> starts(1, Eigen::VectorXd(6));
  starts[0] << tf, b.x(), b.y(), b.z(), 0.0, 0.0;

  // With c = 0 a vertical transfer has no sensitivity to the primer.  Second
  // start: constant-acceleration bang-bang along z (push, then brake).
  const double gz = p.g.norm();
  const double dz = std::abs(p.z_f - p.r0.z());
  const double a1 = p.gamma(0.0) - gz, a2 = p.gamma(0.0) + gz;
  if (a1 > 0.0 && dz > 0.0) {
    const double vpk = std::sqrt(2.0 * dz / (1.0 / a1 + 1.0 / a2));
    const double t1 = vpk / a1, t2 = vpk / a2;
    const double sz = p.z_f >= p.r0.z() ? 1.0 : -1.0;
    const double scale = 1.0 / ((p.gamma(t1 + t2) + gz) * (t2 / t1));
    Eigen::VectorXd y(6);
    y << t1 + t2, 0.0, 0.0, sz * scale, 0.0, -sz * scale / t1;
    starts.push_back(y);
  }
  NewtonResult nr;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      nr = solve_newton(f, starts[i], typical, o.newton);
      break;
    } catch (const Error&) {
      if (i + 1 == starts.size()) throw;
    }
  }
  FlatPegSolution s = unpack(nr.y);
  s.residual_norm = nr.residual.norm();
  s.report = std::move(nr.report);
  return s;
}

double flat_peg_hamiltonian(const FlatPegProblem& p, const FlatPegSolution& s, double t, double tol) {
  const FlatPegState st = flat_peg_state(p, s.b, s.c, t, tol);
  const Vec3 pv = s.primer(t);
  return -s.c.dot(st.v) + pv.dot(p.g) + p.gamma(t) * pv.norm();
}

double flat_peg_augmented_hamiltonian(const FlatPegProblem& p, const FlatPegSolution& s, double t, double tol) {
  // Mass co-state: psi_m(t) = -int_t^tf T / m^2 |psi_v| with psi_m(tf) = 0.
  const auto integrand = [&](double tau) {
    const double m = p.mass(tau);
    return p.thrust / (m * m) * s.primer(tau).norm();
  };
  const double tail = integrate(integrand, breakpoints(s.b, s.c, t, s.tf), tol);
  return flat_peg_hamiltonian(p, s, t, tol) + p.mass_flow * tail;
}

double pmp_margin(const FlatPegProblem& p, const FlatPegSolution& s, double t, const Vec3& w) {
  const Vec3 pv = s.primer(t);
  return p.gamma(t) * (pv.dot(s.direction(t)) - pv.dot(w.normalized()));
}

PmpReport verify_pmp_optimality(const FlatPegSolution& s, const FlatPegProblem& p, int n_perturbations, int n_times,
                                std::uint64_t seed) {
  PmpReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> size(0.0, 1.0);
  for (int i = 0; i < n_times; ++i) {
    const double t = s.tf * (i + 0.5) / n_times;
    const Vec3 u = s.direction(t);
    for (int j = 0; j < n_perturbations; ++j) {
      Vec3 w;
      do {
        const Vec3 n(normal(rng), normal(rng), normal(rng));
        w = u + size(rng) * n;
      } while (w.norm() < 1e-9);
      const double m = pmp_margin(p, s, t, w);
      ++rep.checks;
      if (m >= 0.0) ++rep.passed;
      rep.min_margin = std::min(rep.min_margin, m);
    }
  }
  return rep;
}

FlatPegProblem flat_peg_demo() {
  FlatPegProblem p;
  const double g0 = 9.80665, isp = 330.0;
  p.g = Vec3(0.0, 0.0, -4.9028e12 / (1737400.0 * 1737400.0));
  p.thrust = 18000.0;
  p.mass_flow = p.thrust / (isp * g0);
  p.m0 = 7000.0;
  p.r0 = Vec3(0.0, 0.0, 15000.0);
  p.v0 = Vec3(1690.0, 0.0, 0.0);
  p.y_f = 0.0;
  p.z_f = 2000.0;
  p.v_f = Vec3(40.0, 0.0, -40.0);
  return p;
}

}  // namespace ldg
