// Damped Newton iteration with a central finite-difference Jacobian.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace ldg {

struct NewtonOptions {
  double tolerance = 1e-8;        ///< on the 2-norm of the (already scaled) residual
  int max_iterations = 20;
  int max_halvings = 5;
  double fd_relative_step = 1e-6;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_history;  ///< norm before each update, plus the final one
  Eigen::MatrixXd jacobian;              ///< at the last linearisation point
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Column j uses step fd_relative_step * max(|y_j|, typical_j).
Eigen::MatrixXd central_difference_jacobian(const ResidualFn& f, const Eigen::VectorXd& y,
                                            const Eigen::VectorXd& typical, double relative_step);

struct NewtonResult {
  Eigen::VectorXd y;
  Eigen::VectorXd residual;
  NewtonReport report;
};

/// Solves f(y) = 0.  A residual evaluation that throws ldg::Error during the
/// step search is treated as a failed trial and the step is halved.
/// Throws ConvergenceError (with residual history) or SingularSystemError.
NewtonResult solve_newton(const ResidualFn& f, Eigen::VectorXd y0, const Eigen::VectorXd& typical,
                          const NewtonOptions& options);

}  // namespace ldg
