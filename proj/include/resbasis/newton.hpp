#pragma once

// Damped Newton-Raphson for small dense systems with a central-difference
// Jacobian.

#include <Eigen/Dense>

#include <functional>

namespace resbasis {

struct NewtonOptions {
  int max_iterations = 100;
  int max_halvings = 30;
  double converge_tol = 1e-12;  // sup-norm of the residual
  double accept_tol = 1e-10;    // accepted if converge_tol is never reached
  double fd_relative_step = 1e-7;
};

using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Central differences, step fd_relative_step * max(1, |x_i|) per column.
Eigen::MatrixXd fd_jacobian(const VectorFunction& f, const Eigen::VectorXd& x,
                            double relative_step);

struct NewtonResult {
  Eigen::VectorXd x;
  double residual_sup = 0.0;
  int iterations = 0;
};

/// Throws Error{kNonConvergence} when the residual sup-norm ends above
/// accept_tol, and Error{kSingularJacobian} on a rank-deficient Jacobian.
NewtonResult newton_solve(const VectorFunction& f, Eigen::VectorXd x0, const NewtonOptions& options);

}  // namespace resbasis
