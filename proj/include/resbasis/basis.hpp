#pragma once

// Spherically symmetric extremizer modes of the isotropic stress-gradient
// functional on a shell.
//
// Every mode has the closed form
//
//   S_par(r) = c0 / (w^3 r^3) * ( c1 + c4 r^3 / r_o^3
//                                 + (c2 w r + c3) cos(w r) - (c2 - c3 w r) sin(w r) ),
//   S_perp   = S_par + r S_par' / 2,
//
// with c1^2 + c2^2 + c3^2 + c4^2 = 1 and eigenvalue lambda = w^2. The constants
// are fixed by S_par = 0 and r S_par'' - (p - 4) S_par' = 0 at both radii plus
// unit L2 norm. Only p = beta + gamma enters; k = 2 beta - gamma affects the
// Lagrange multiplier mu alone.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resbasis/fields.hpp"
#include "resbasis/newton.hpp"
#include "resbasis/quadrature.hpp"

namespace resbasis {

/// Strip coordinates p = beta + gamma, k = 2 beta - gamma (chi = 1).
struct FunctionalParams {
  double p = 0.0;
  double k = 0.0;

  static FunctionalParams from_beta_gamma(double beta, double gamma) {
    return {beta + gamma, 2.0 * beta - gamma};
  }
  double beta() const { return (p + k) / 3.0; }
  double gamma() const { return (2.0 * p - k) / 3.0; }

  friend bool operator==(const FunctionalParams&, const FunctionalParams&) = default;
};

/// Names the violated inequality of the viable strip, if any. The closed strip
/// 0 <= p <= 5, k >= 0 is admitted unless `strict` asks for the open one.
std::optional<std::string> strip_violation(const FunctionalParams& params, bool strict = false);

/// Throws Error{kInvalidArgument} carrying strip_violation's message.
void validate_params(const FunctionalParams& params, bool strict = false);

struct ModeConstants {
  int index_n = 0;
  double omega = 0.0;
  std::array<double, 5> c{};  // c0 .. c4

  double lambda() const { return omega * omega; }

  friend bool operator==(const ModeConstants&, const ModeConstants&) = default;
};

/// Unknown vector of the mode system, ordered (c0, c1, c2, c3, c4, omega).
using ModeVector = Eigen::Matrix<double, 6, 1>;
ModeVector pack(const ModeConstants& constants);
ModeConstants unpack(const ModeVector& x, int index_n);

struct SolverOptions {
  QuadratureSpec quadrature;
  NewtonOptions newton;
  double continuation_initial_step = 0.05;
  double continuation_min_step = 1e-4;
  double continuation_max_step = 0.5;
  double max_condition = 1e12;
  double duplicate_tol = 1e-6;
  int max_reseeds = 5;
};

/// S_par and its radial derivatives of order 0..4 at r.
std::array<double, 5> par_derivatives(const ModeConstants& constants, const ShellGeometry& geometry,
                                      double r);

/// (S_par, S_perp) of a mode at r. Throws Error{kDomain} outside the shell.
StressPair eval_mode(const ModeConstants& constants, const FunctionalParams& params,
                     const ShellGeometry& geometry, double r);

/// Lagrange multiplier mu(r) = -c0 / (2 w r^2) (c1 - 2 c4 r^3 / r_o^3 + (1 - beta) g(r))
/// with g(r) = (c3 + c2 w r) cos(w r) - (c2 - c3 w r) sin(w r).
double eval_mu(const ModeConstants& constants, const FunctionalParams& params,
               const ShellGeometry& geometry, double r);

/// mu'(r), differentiated analytically.
double eval_mu_derivative(const ModeConstants& constants, const FunctionalParams& params,
                          const ShellGeometry& geometry, double r);

/// mu = k f1 + f2, where f1 and f2 depend on p but not on k.
struct MuParts {
  double f1 = 0.0;
  double f2 = 0.0;
};
MuParts mu_parts(const ModeConstants& constants, double p, const ShellGeometry& geometry, double r);

/// The six mode equations at x = (c0, c1, c2, c3, c4, omega):
/// [S_par(r_i), S_par(r_o), NB(r_i), NB(r_o), norm - 1/(4 pi), sum c_i^2 - 1]
/// with NB(r) = (c0 r / w)(c1 / r^3 + c4 / r_o^3) - p S_par'(r) and the norm
/// integral taken with the spec's radial weight.
ModeVector residual_system(const ModeVector& x, double p, const ShellGeometry& geometry,
                           const QuadratureSpec& spec);

/// Mode N at p = 0 (c1 = c4 = 0) by damped Newton from w0 = N pi / (r_o - r_i),
/// c2 = 0, c3 = 1. Sign convention: c3 >= 0 and c0 > 0. `known_omegas` are
/// lower modes already found; a converged w within duplicate_tol of one of
/// them triggers a reseed.
ModeConstants solve_p0(int index_n, const ShellGeometry& geometry, const SolverOptions& options,
                       std::span<const double> known_omegas = {});

/// Modes 1..count at p = 0 with duplicate detection.
std::vector<ModeConstants> solve_p0_sequence(int count, const ShellGeometry& geometry,
                                             const SolverOptions& options);

/// Follows a solution branch from p_start to p_target with an Euler
/// predictor (M v = b, M = d residual / d x, b = -d residual / d p) and a
/// Newton corrector.
ModeConstants continue_in_p(const ModeConstants& start, double p_target,
                            const ShellGeometry& geometry, const SolverOptions& options,
                            double p_start = 0.0);

/// Newton on the full six-equation system at p, seeded with `seed`.
ModeConstants refine_mode(const ModeConstants& seed, double p, const ShellGeometry& geometry,
                          const SolverOptions& options);

/// A solved mode bundled with its closed-form stress field.
struct BasisMode {
  ModeConstants constants;
  FunctionalParams params;
  ShellGeometry geometry;
  RadialField field;
};

BasisMode make_mode(const ModeConstants& constants, const FunctionalParams& params,
                    const ShellGeometry& geometry);

/// Modes 1..count at params.p, solved at p = 0 and continued.
std::vector<BasisMode> solve_modes(int count, const FunctionalParams& params,
                                   const ShellGeometry& geometry, const SolverOptions& options);

/// Left-minus-right residuals of the two radial Euler-Lagrange equations.
StressPair el_residual(const BasisMode& mode, double r);

/// Same, with the multiplier of the normalization constraint given explicitly
/// instead of omega^2.
StressPair el_residual(const BasisMode& mode, double r, double lambda);

/// r S_par'' - (p - 4) S_par' at r.
double natural_bc_residual(const BasisMode& mode, double r);

}  // namespace resbasis
