#pragma once

// Orthogonal expansion of a residual stress field in a mode basis, truncation
// error curves and power-law decay rates.

#include <optional>
#include <span>
#include <vector>

#include "resbasis/basis.hpp"
#include "resbasis/fields.hpp"
#include "resbasis/quadrature.hpp"

namespace resbasis {

/// b_N = <target, S_N>. Modes must share p and geometry with each other and
/// with the target. Each coefficient depends on its own mode only.
std::vector<double> project(const RadialField& target, std::span<const BasisMode> modes,
                            const QuadratureSpec& spec);

struct ErrorCurves {
  std::vector<double> e_l2;                  // e_l2[n - 1] for the n-term approximation
  std::optional<std::vector<double>> e_h1;   // absent for targets with breakpoints
};

/// Relative L2 (and, for smooth targets, H1) errors of the n-term
/// approximations, n = 1..coefficients.size().
ErrorCurves error_curves(const RadialField& target, std::span<const BasisMode> modes,
                         std::span<const double> coefficients, const QuadratureSpec& spec);

/// Least-squares slope of log(values) against log(indices). Needs at least
/// two points; throws Error{kNonpositiveValue} on values <= 0.
double decay_slope(std::span<const double> indices, std::span<const double> values);

/// Slope of series[n - 1] over n in [lo, hi] (1-based, hi - lo + 1 >= 10).
double decay_slope(std::span<const double> series, int lo, int hi);

/// Slope over the odd (or even) n in [lo, hi] only.
double decay_slope_parity(std::span<const double> series, int lo, int hi, bool odd);

/// Sum of the first n terms b_N S_N.
RadialField reconstruct(std::span<const BasisMode> modes, std::span<const double> coefficients,
                        std::size_t n);

/// Largest excursion of `approx` beyond the range of `target` over
/// [center - half_width, center + half_width], sampled at `samples` radii.
double gibbs_overshoot(const RadialField& target, const RadialField& approx, double center,
                       double half_width, int samples = 2001);

struct DecaySlopes {
  std::optional<double> e_l2;
  std::optional<double> e_h1;
  std::optional<double> b_odd;
  std::optional<double> b_even;
};

struct FitReport {
  FunctionalParams params;
  NormWeight norm_weight = NormWeight::kR2;
  int n_max = 0;
  std::vector<double> coefficients;
  std::vector<double> e_l2;
  std::optional<std::vector<double>> e_h1;
  DecaySlopes slopes;
  int window_lo = 20;
  int window_hi = 100;
};

/// Projects, builds error curves and fits slopes over [window_lo, window_hi]
/// clipped to n_max. Slopes are left empty when the clipped window is shorter
/// than 10.
FitReport fit(const RadialField& target, std::span<const BasisMode> modes,
              const QuadratureSpec& spec, int window_lo = 20, int window_hi = 100);

}  // namespace resbasis
