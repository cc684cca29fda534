#pragma once

// Integrals over the shell: composite Gauss-Legendre with per-segment
// refinement, split at field breakpoints, and the inner products built on it.

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "resbasis/fields.hpp"

namespace resbasis {

/// Radial weight applied to every shell integral.
///
/// kR2 integrates with r^2 dr, i.e. the true volume measure up to 4 pi.
/// kPaperLiteral drops the r^2 factor (unweighted normalization).
enum class NormWeight { kR2, kPaperLiteral };

std::string_view to_string(NormWeight weight);
NormWeight parse_norm_weight(std::string_view text);
double radial_weight(NormWeight weight, double r);

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int base_panels = 4;
  int nodes_per_panel = 16;
  int max_panels = 1 << 14;
  NormWeight weight = NormWeight::kR2;

  void validate() const;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point rule, computed once per n and cached.
const GaussLegendreRule& gauss_legendre(int n);

/// Integral of f dr over the shell, split at `breakpoints`. Each smooth segment
/// starts at max(spec.base_panels, min_panels) panels and is refined by
/// doubling until two successive estimates agree to
/// max(abs_tol, rel_tol |estimate|).
double integrate(const std::function<double(double)>& f, const ShellGeometry& geometry,
                 std::span<const double> breakpoints, const QuadratureSpec& spec,
                 int min_panels = 1);

/// Fixed composite rule: `panels_per_segment` equal panels on every smooth
/// segment. Weights are for dr (no radial weight applied).
struct NodeSet {
  std::vector<double> r;
  std::vector<double> w;
};
NodeSet composite_nodes(const ShellGeometry& geometry, std::span<const double> breakpoints,
                        int panels_per_segment, int nodes_per_panel);

/// 4 pi integral of (a_par b_par + 2 a_perp b_perp) w(r) dr.
double l2_inner(const RadialField& a, const RadialField& b, const QuadratureSpec& spec);

/// 4 pi integral of (|S|^2 + |Grad S|^2) w(r) dr for a smooth divergence-free
/// field. Refuses fields with breakpoints.
double h1_error_sq(const RadialField& diff, const QuadratureSpec& spec);

/// Stress-gradient functional for a smooth divergence-free field at strip
/// coordinate p:
/// E = 1/2 4 pi integral of [(S_par' + 2 S_perp')^2 / 2 + p (3 S_par'^2 / 2 - 2 S_par' S_perp')] w dr.
double energy(const RadialField& field, double p, const QuadratureSpec& spec);

/// Polarized energy E(a + b) - E(a) - E(b).
double energy_inner(const RadialField& a, const RadialField& b, double p,
                    const QuadratureSpec& spec);

}  // namespace resbasis
