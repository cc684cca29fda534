#pragma once

// Benchmark residual stress fields on the shell: the thermoelastic field of a
// linear temperature profile, the shrink fit of two nested shells, and fields
// sampled from CSV.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "resbasis/fields.hpp"

namespace resbasis {

/// Temperature T(r) = c r / r_o in a shell with bulk modulus kappa, shear
/// modulus mu and thermal expansion alpha.
struct ThermoelasticSpec {
  double kappa = 2.8;
  double mu = 1.0;
  double alpha = 1.75e-2;
  double c = 1.0 / 9.0;
  ShellGeometry geometry;

  void validate() const;
};

RadialField thermoelastic_field(const ThermoelasticSpec& spec);

/// Sigma_par and its first two derivatives at r.
std::array<double, 3> thermoelastic_par_derivatives(const ThermoelasticSpec& spec, double r);

/// r Sigma_par'' + 4 Sigma_par' + 36 alpha kappa mu T' / (3 kappa + 4 mu); zero
/// for the exact field.
double thermoelastic_governing_residual(const ThermoelasticSpec& spec, double r);

/// Inner shell [r_i, r_m] pressed into outer shell [r_m, r_o] with radial
/// interference delta.
struct ShrinkFitSpec {
  double kappa = 3.0;
  double mu = 1.0;
  double r_m = 0.75;
  double delta = 0.01;
  ShellGeometry geometry;

  void validate() const;
};

/// Interface pressure p0 (> 0).
double shrinkfit_pressure(const ShrinkFitSpec& spec);

/// Piecewise field with a breakpoint at r_m. At r = r_m itself the outer
/// piece is returned.
RadialField shrinkfit_field(const ShrinkFitSpec& spec);

/// One-sided limits of the two pieces, valid on the whole shell.
StressPair shrinkfit_inner(const ShrinkFitSpec& spec, double r);
StressPair shrinkfit_outer(const ShrinkFitSpec& spec, double r);

/// Which CSV columns hold the two components.
struct CsvColumns {
  std::string r = "r";
  std::string par = "s_par";
  std::string perp = "s_perp";
};

struct SampledField {
  RadialField field;
  std::vector<std::string> warnings;
};

/// Spline-interpolates sampled (r, S_par, S_perp) rows, one spline per smooth
/// segment between `breakpoints`. A radius may repeat only at a breakpoint,
/// where the first row closes the left segment and the second opens the
/// right one. Samples must cover the shell and each segment needs at least
/// four of them.
///
/// Violations of the boundary conditions or of equilibrium are reported as
/// warnings; malformed input throws Error{kSchema} or Error{kInvalidArgument}.
SampledField load_sampled_field(std::string_view csv, const ShellGeometry& geometry,
                                std::vector<double> breakpoints = {},
                                const CsvColumns& columns = {});

}  // namespace resbasis
