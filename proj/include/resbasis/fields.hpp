#pragma once

// Spherically symmetric stress fields S = S_par e_r(x)e_r + S_perp (1 - e_r(x)e_r)
// on a spherical shell, and the radial calculus used by the rest of the library.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace resbasis {

/// (S_par, S_perp) at one radius.
struct StressPair {
  double par = 0.0;
  double perp = 0.0;
};

/// Radial extent of the shell, in dimensionless units.
struct ShellGeometry {
  double r_inner = 0.5;
  double r_outer = 1.0;

  ShellGeometry() = default;
  ShellGeometry(double inner, double outer);

  double width() const { return r_outer - r_inner; }
  bool contains(double r) const { return r >= r_inner && r <= r_outer; }

  friend bool operator==(const ShellGeometry&, const ShellGeometry&) = default;
};

/// A scalar function of radius with its first derivative and the interior
/// radii where either is discontinuous.
///
/// `panel_hint` is the minimum number of quadrature panels per smooth segment
/// needed to resolve the profile; oscillatory basis modes raise it.
class RadialProfile {
 public:
  using Function = std::function<double(double)>;

  /// The zero profile.
  RadialProfile();
  RadialProfile(Function value, Function derivative,
                std::vector<double> breakpoints = {}, int panel_hint = 1);

  /// Profile whose derivative is taken by central differences with `step`.
  static RadialProfile with_numeric_derivative(Function value, double step,
                                               std::vector<double> breakpoints = {});

  double value(double r) const { return value_(r); }
  double derivative(double r) const { return derivative_(r); }
  double operator()(double r) const { return value_(r); }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  int panel_hint() const { return panel_hint_; }

  RadialProfile scaled(double factor) const;
  friend RadialProfile operator+(const RadialProfile& a, const RadialProfile& b);
  friend RadialProfile operator-(const RadialProfile& a, const RadialProfile& b);

 private:
  Function value_;
  Function derivative_;
  std::vector<double> breakpoints_;
  int panel_hint_ = 1;
};

/// A spherically symmetric stress field: radial (S_par) and transverse
/// (S_perp) components on a shell.
class RadialField {
 public:
  RadialField(RadialProfile s_par, RadialProfile s_perp, ShellGeometry geometry);

  static RadialField zero(const ShellGeometry& geometry);

  const RadialProfile& s_par() const { return s_par_; }
  const RadialProfile& s_perp() const { return s_perp_; }
  const ShellGeometry& geometry() const { return geometry_; }

  /// Sorted union of both components' breakpoints.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool has_breakpoints() const { return !breakpoints_.empty(); }
  int panel_hint() const;

  /// |S|^2 = S_par^2 + 2 S_perp^2 at r.
  double norm_sq_density(double r) const;

  RadialField scaled(double factor) const;
  friend RadialField operator+(const RadialField& a, const RadialField& b);
  friend RadialField operator-(const RadialField& a, const RadialField& b);

 private:
  RadialProfile s_par_;
  RadialProfile s_perp_;
  ShellGeometry geometry_;
  std::vector<double> breakpoints_;
};

/// Radial component of Div S: S_par' + 2 (S_par - S_perp) / r.
double equilibrium_residual(const RadialField& field, double r);

/// Transverse component that makes (s_par, S_perp) divergence free:
/// S_perp = S_par + r S_par' / 2. Its derivative needs S_par''; pass it when
/// known, otherwise S_par' is differenced with `fd_step`.
RadialProfile perp_from_par(const RadialProfile& s_par,
                            std::optional<RadialProfile::Function> second_derivative = std::nullopt,
                            double fd_step = 1e-6);

/// |Grad S|^2 for a divergence-free field, 2 (S_par'^2 + S_perp'^2).
double gradient_norm_sq(const RadialField& field, double r);

/// True when r lies on one of the field's breakpoints (within round-off).
bool on_breakpoint(const RadialField& field, double r);

/// Not-a-knot cubic spline through (x_i, y_i) with analytic derivatives.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace resbasis
