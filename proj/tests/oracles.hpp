#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of them call the mode solver.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "resbasis/basis.hpp"

namespace oracle {

// y = (S, S', S'', S''') for
//   S'''' + 8 S''' / r + (8 / r^2 + lambda) S'' + (-8 / r^3 + 4 lambda / r) S' = 0.
inline std::array<double, 4> shoot(double omega, double ri, double ro,
                                   std::array<double, 4> y0) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 4>;
  const double lam = omega * omega;
  auto rhs = [lam](const State& y, State& dy, double r) {
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = y[3];
    dy[3] = -8.0 * y[3] / r - (8.0 / (r * r) + lam) * y[2] - (-8.0 / (r * r * r) + 4.0 * lam / r) * y[1];
  };
  auto stepper = ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_adaptive(stepper, rhs, y0, ri, ro, 1e-4);
  return y0;
}

// Determinant of the two boundary conditions at r_o over the two-dimensional
// family of solutions that satisfy both conditions at r_i.
inline double boundary_determinant(double omega, double p, double ri = 0.5, double ro = 1.0) {
  const double s2 = (p - 4.0) / ri;  // S'' = (p - 4) S' / r at r_i
  const auto a = shoot(omega, ri, ro, {0.0, 1.0, s2, 0.0});
  const auto b = shoot(omega, ri, ro, {0.0, 0.0, 0.0, 1.0});
  auto nb = [&](const std::array<double, 4>& y) { return ro * y[2] - (p - 4.0) * y[1]; };
  return a[0] * nb(b) - b[0] * nb(a);
}

// The first `count` roots in omega of boundary_determinant, by scanning and
// bisection.
inline std::vector<double> shooting_frequencies(int count, double p, double ri = 0.5,
                                                double ro = 1.0, double step = 0.05) {
  std::vector<double> roots;
  double w0 = 1.0;
  double d0 = boundary_determinant(w0, p, ri, ro);
  while (static_cast<int>(roots.size()) < count) {
    const double w1 = w0 + step;
    const double d1 = boundary_determinant(w1, p, ri, ro);
    if ((d0 < 0.0) != (d1 < 0.0)) {
      double lo = w0, hi = w1, dlo = d0;
      for (int i = 0; i < 80 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double dm = boundary_determinant(mid, p, ri, ro);
        if ((dm < 0.0) == (dlo < 0.0)) {
          lo = mid;
          dlo = dm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    w0 = w1;
    d0 = d1;
  }
  return roots;
}

// Amplitude/phase representation of a p = 0 mode.
inline resbasis::StressPair amplitude_phase(const resbasis::ModeConstants& m, double r) {
  const double c0 = m.c[0], c2 = m.c[2], c3 = m.c[3], w = m.omega;
  const double wr = w * r;
  const double a_par = c0 * std::sqrt(1.0 + wr * wr) / (w * w * w * r * r * r);
  const double th_par = std::asin((c2 * wr + c3) / std::sqrt(1.0 + wr * wr));
  const double q = std::sqrt(wr * wr * wr * wr - wr * wr + 1.0);
  const double a_perp = c0 * q / (2.0 * w * w * w * r * r * r);
  const double th_perp = std::acos((c3 * (wr * wr - 1.0) - c2 * wr) / q);
  return {a_par * std::sin(wr + th_par), a_perp * std::cos(wr - th_perp)};
}

// Sinusoidal form of mu at p = 0.
inline double mu_sinusoidal(const resbasis::ModeConstants& m, double beta, double r) {
  const double c0 = m.c[0], c2 = m.c[2], c3 = m.c[3], w = m.omega;
  const double wr = w * r;
  const double amp = std::sqrt((1.0 + wr * wr) * (c2 * c2 + c3 * c3));
  const double th = std::asin((c3 + c2 * wr) / amp);
  return -c0 * (1.0 - beta) * amp * std::sin(wr + th) / (2.0 * w * r * r);
}

// Fourth-order central differences of a scalar function.
inline double d1(const std::function<double(double)>& f, double r, double h) {
  return (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h);
}
inline double d2(const std::function<double(double)>& f, double r, double h) {
  return (-f(r - 2 * h) + 16 * f(r - h) - 30 * f(r) + 16 * f(r + h) - f(r + 2 * h)) / (12 * h * h);
}

// Continuation by integrating dx/dp = M^{-1} b with classical RK4 and no
// corrector.
inline resbasis::ModeVector integrate_branch(const resbasis::ModeConstants& start, double p_target,
                                             int steps, const resbasis::ShellGeometry& g) {
  using resbasis::ModeVector;
  const resbasis::QuadratureSpec spec;
  auto velocity = [&](const ModeVector& x, double p) -> ModeVector {
    Eigen::Matrix<double, 6, 6> m;
    for (int j = 0; j < 6; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
      ModeVector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      m.col(j) = (resbasis::residual_system(xp, p, g, spec) - resbasis::residual_system(xm, p, g, spec)) /
                 (2 * h);
    }
    const double hp = 1e-7;
    const ModeVector b =
        -(resbasis::residual_system(x, p + hp, g, spec) - resbasis::residual_system(x, p - hp, g, spec)) /
        (2 * hp);
    return m.partialPivLu().solve(b);
  };
  ModeVector x = resbasis::pack(start);
  const double h = p_target / steps;
  double p = 0.0;
  for (int i = 0; i < steps; ++i) {
    const ModeVector k1 = velocity(x, p);
    const ModeVector k2 = velocity(x + 0.5 * h * k1, p + 0.5 * h);
    const ModeVector k3 = velocity(x + 0.5 * h * k2, p + 0.5 * h);
    const ModeVector k4 = velocity(x + h * k3, p + h);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    p += h;
  }
  return x;
}

}  // namespace oracle
