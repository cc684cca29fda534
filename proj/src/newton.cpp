#include "resbasis/newton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resbasis/errors.hpp"

namespace resbasis {

Eigen::MatrixXd fd_jacobian(const VectorFunction& f, const Eigen::VectorXd& x,
                            double relative_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = relative_step * std::max(1.0, std::abs(x[j]));
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Eigen::VectorXd col = (f(xp) - f(xm)) / (2.0 * h);
    if (j == 0) jac.resize(col.size(), n);
    jac.col(j) = col;
  }
  return jac;
}

NewtonResult newton_solve(const VectorFunction& f, Eigen::VectorXd x0, const NewtonOptions& options) {
  NewtonResult result;
  result.x = std::move(x0);
  Eigen::VectorXd r = f(result.x);
  result.residual_sup = r.lpNorm<Eigen::Infinity>();

  for (int it = 0; it < options.max_iterations; ++it) {
    if (!std::isfinite(result.residual_sup)) break;
    if (result.residual_sup <= options.converge_tol) return result;

    const Eigen::MatrixXd jac = fd_jacobian(f, result.x, options.fd_relative_step);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      throw Error(ErrorKind::kSingularJacobian, "Newton: singular Jacobian");
    }
    const Eigen::VectorXd step = lu.solve(-r);

    // Halve the step until the residual decreases.
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h <= options.max_halvings; ++h) {
      const Eigen::VectorXd trial = result.x + scale * step;
      const Eigen::VectorXd rt = f(trial);
      const double sup = rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(sup) && sup < result.residual_sup) {
        result.x = trial;
        r = rt;
        result.residual_sup = sup;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    result.iterations = it + 1;
    if (!improved) break;  // stalled, usually at round-off level
  }

  if (result.residual_sup <= options.accept_tol) return result;
  throw Error(ErrorKind::kNonConvergence,
              "Newton did not converge (residual sup-norm " + std::to_string(result.residual_sup) +
                  " after " + std::to_string(result.iterations) + " iterations)");
}

}  // namespace resbasis
