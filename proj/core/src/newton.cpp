#include "ldg/newton.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "ldg/errors.hpp"

namespace ldg {

Eigen::MatrixXd central_difference_jacobian(const ResidualFn& f, const Eigen::VectorXd& y,
                                            const Eigen::VectorXd& typical, double relative_step) {
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double h = relative_step * std::max(std::abs(y[j]), typical[j]);
    Eigen::VectorXd yp = y, ym = y;
    yp[j] += h;
    ym[j] -= h;
    const Eigen::VectorXd fp = f(yp);
    const Eigen::VectorXd fm = f(ym);
    if (jac.size() == 0) jac.resize(fp.size(), y.size());
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

NewtonResult solve_newton(const ResidualFn& f, Eigen::VectorXd y, const Eigen::VectorXd& typical,
                          const NewtonOptions& opt) {
  NewtonResult out;
  Eigen::VectorXd r = f(y);
  double norm = r.norm();
  out.report.residual_history.push_back(norm);

  while (norm >= opt.tolerance) {
    if (out.report.iterations >= opt.max_iterations) {
      throw ConvergenceError("Newton did not converge in " + std::to_string(opt.max_iterations) +
                                 " iterations (residual " + std::to_string(norm) + ")",
                             out.report.residual_history);
    }
    const Eigen::MatrixXd jac = central_difference_jacobian(f, y, typical, opt.fd_relative_step);
    out.report.jacobian = jac;

    // Column scaling keeps the LU pivoting meaningful across mixed units.
    const Eigen::MatrixXd scaled = jac * typical.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(scaled);
    if (lu.rank() < y.size()) throw SingularSystemError("Newton Jacobian is rank deficient");
    const Eigen::VectorXd step = typical.cwiseProduct(lu.solve(r));
    if (!step.allFinite()) throw SingularSystemError("Newton step is not finite");

    double lambda = 1.0;
    Eigen::VectorXd y_try, r_try;
    double norm_try = std::numeric_limits<double>::infinity();
    for (int halving = 0; halving <= opt.max_halvings; ++halving) {
      y_try = y - lambda * step;
      try {
        r_try = f(y_try);
        norm_try = r_try.allFinite() ? r_try.norm() : std::numeric_limits<double>::infinity();
      } catch (const Error&) {
        norm_try = std::numeric_limits<double>::infinity();
      }
      if (norm_try < norm) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(norm_try)) {
      throw ConvergenceError("Newton step search failed: every trial diverged", out.report.residual_history);
    }
    y = y_try;
    r = r_try;
    norm = norm_try;
    ++out.report.iterations;
    out.report.residual_history.push_back(norm);
  }

  out.y = std::move(y);
  out.residual = std::move(r);
  return out;
}

}  // namespace ldg
