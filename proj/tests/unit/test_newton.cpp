#include <doctest.h>

#include <cmath>

#include "ldg/errors.hpp"
#include "ldg/newton.hpp"

using namespace ldg;

TEST_CASE("solves a nonlinear system quadratically") {
  const ResidualFn f = [](const Eigen::VectorXd& y) {
    Eigen::VectorXd r(2);
    r << y(0) * y(0) + y(1) * y(1) - 4.0, std::exp(y(0)) - y(1) - 1.0;
    return r;
  };
  Eigen::VectorXd y0(2);
  y0 << 1.0, 1.0;
  const NewtonResult r = solve_newton(f, y0, Eigen::VectorXd::Ones(2), NewtonOptions{});
  CHECK(r.residual.norm() < 1e-8);
  CHECK(r.report.iterations <= 8);
  CHECK(r.report.residual_history.size() == static_cast<std::size_t>(r.report.iterations + 1));
  CHECK(f(r.y).norm() < 1e-8);
}

TEST_CASE("finite-difference Jacobian matches the analytic one") {
  const ResidualFn f = [](const Eigen::VectorXd& y) {
    Eigen::VectorXd r(2);
    r << std::sin(y(0)) * y(1), y(0) * y(0) * y(0);
    return r;
  };
  Eigen::VectorXd y(2);
  y << 0.7, -1.3;
  const Eigen::MatrixXd J = central_difference_jacobian(f, y, Eigen::VectorXd::Ones(2), 1e-6);
  CHECK(J(0, 0) == doctest::Approx(std::cos(0.7) * -1.3).epsilon(1e-8));
  CHECK(J(0, 1) == doctest::Approx(std::sin(0.7)).epsilon(1e-8));
  CHECK(J(1, 0) == doctest::Approx(3 * 0.49).epsilon(1e-8));
  CHECK(std::abs(J(1, 1)) < 1e-12);
}

TEST_CASE("singular Jacobian is reported") {
  const ResidualFn f = [](const Eigen::VectorXd& y) {
    Eigen::VectorXd r(2);
    r << y(0) + y(1) - 1.0, 2 * y(0) + 2 * y(1) - 3.0;
    return r;
  };
  CHECK_THROWS_AS(solve_newton(f, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2), NewtonOptions{}),
                  SingularSystemError);
}

TEST_CASE("non-convergence carries the residual history") {
  const ResidualFn f = [](const Eigen::VectorXd& y) {
    Eigen::VectorXd r(1);
    r << y(0) * y(0) + 1.0;  // no real root
    return r;
  };
  NewtonOptions opt;
  opt.max_iterations = 6;
  try {
    solve_newton(f, Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Ones(1), opt);
    FAIL("expected failure");
  } catch (const ConvergenceError& e) {
    CHECK(!e.residual_history().empty());
  } catch (const SingularSystemError&) {
  }
}

TEST_CASE("a throwing residual is stepped around") {
  int calls = 0;
  const ResidualFn f = [&](const Eigen::VectorXd& y) {
    ++calls;
    if (std::abs(y(0)) > 2.5) throw DomainError("out of range");
    Eigen::VectorXd r(1);
    r << std::atan(y(0));
    return r;
  };
  const NewtonResult r = solve_newton(f, Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Ones(1), NewtonOptions{});
  CHECK(std::abs(r.y(0)) < 1e-8);
  CHECK(calls > 0);
}
