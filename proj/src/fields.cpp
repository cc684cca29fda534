#include "resbasis/fields.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

#include "resbasis/errors.hpp"

namespace resbasis {

namespace {

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double breakpoint_tolerance(const ShellGeometry& g) { return 1e-12 * g.width(); }

}  // namespace

ShellGeometry::ShellGeometry(double inner, double outer) : r_inner(inner), r_outer(outer) {
  if (!(inner > 0.0) || !(outer > inner) || !std::isfinite(outer)) {
    throw Error(ErrorKind::kInvalidArgument,
                "shell radii must satisfy 0 < r_inner < r_outer (got " + std::to_string(inner) +
                    ", " + std::to_string(outer) + ")");
  }
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile()
    : value_([](double) { return 0.0; }), derivative_([](double) { return 0.0; }) {}

RadialProfile::RadialProfile(Function value, Function derivative, std::vector<double> breakpoints,
                             int panel_hint)
    : value_(std::move(value)),
      derivative_(std::move(derivative)),
      breakpoints_(std::move(breakpoints)),
      panel_hint_(std::max(1, panel_hint)) {
  if (!value_ || !derivative_) {
    throw Error(ErrorKind::kInvalidArgument, "radial profile needs value and derivative callables");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()) ||
      std::adjacent_find(breakpoints_.begin(), breakpoints_.end()) != breakpoints_.end()) {
    throw Error(ErrorKind::kInvalidArgument, "breakpoints must be strictly increasing");
  }
}

RadialProfile RadialProfile::with_numeric_derivative(Function value, double step,
                                                     std::vector<double> breakpoints) {
  auto d = [value, step](double r) { return (value(r + step) - value(r - step)) / (2.0 * step); };
  return RadialProfile(std::move(value), d, std::move(breakpoints));
}

RadialProfile RadialProfile::scaled(double factor) const {
  auto v = value_;
  auto d = derivative_;
  return RadialProfile([v, factor](double r) { return factor * v(r); },
                       [d, factor](double r) { return factor * d(r); }, breakpoints_, panel_hint_);
}

RadialProfile operator+(const RadialProfile& a, const RadialProfile& b) {
  auto av = a.value_, bv = b.value_, ad = a.derivative_, bd = b.derivative_;
  return RadialProfile([av, bv](double r) { return av(r) + bv(r); },
                       [ad, bd](double r) { return ad(r) + bd(r); },
                       merge_breakpoints(a.breakpoints_, b.breakpoints_),
                       std::max(a.panel_hint_, b.panel_hint_));
}

RadialProfile operator-(const RadialProfile& a, const RadialProfile& b) { return a + b.scaled(-1.0); }

// ---------------------------------------------------------------------------
// RadialField

RadialField::RadialField(RadialProfile s_par, RadialProfile s_perp, ShellGeometry geometry)
    : s_par_(std::move(s_par)),
      s_perp_(std::move(s_perp)),
      geometry_(geometry),
      breakpoints_(merge_breakpoints(s_par_.breakpoints(), s_perp_.breakpoints())) {
  for (double b : breakpoints_) {
    if (!(b > geometry_.r_inner && b < geometry_.r_outer)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "breakpoint " + std::to_string(b) + " is not strictly inside the shell");
    }
  }
}

RadialField RadialField::zero(const ShellGeometry& geometry) {
  return RadialField(RadialProfile(), RadialProfile(), geometry);
}

int RadialField::panel_hint() const { return std::max(s_par_.panel_hint(), s_perp_.panel_hint()); }

double RadialField::norm_sq_density(double r) const {
  const double a = s_par_(r);
  const double b = s_perp_(r);
  return a * a + 2.0 * b * b;
}

RadialField RadialField::scaled(double factor) const {
  return RadialField(s_par_.scaled(factor), s_perp_.scaled(factor), geometry_);
}

RadialField operator+(const RadialField& a, const RadialField& b) {
  if (!(a.geometry_ == b.geometry_)) {
    throw Error(ErrorKind::kGeometryMismatch, "fields live on different shells");
  }
  return RadialField(a.s_par_ + b.s_par_, a.s_perp_ + b.s_perp_, a.geometry_);
}

RadialField operator-(const RadialField& a, const RadialField& b) { return a + b.scaled(-1.0); }

// ---------------------------------------------------------------------------
// Radial calculus

bool on_breakpoint(const RadialField& field, double r) {
  const double tol = breakpoint_tolerance(field.geometry());
  return std::any_of(field.breakpoints().begin(), field.breakpoints().end(),
                     [&](double b) { return std::abs(r - b) <= tol; });
}

namespace {

void check_evaluable(const RadialField& field, double r) {
  if (!field.geometry().contains(r)) {
    throw Error(ErrorKind::kDomain, "radius " + std::to_string(r) + " is outside the shell");
  }
  if (on_breakpoint(field, r)) {
    throw Error(ErrorKind::kBreakpoint,
                "radius " + std::to_string(r) + " coincides with a field discontinuity");
  }
}

}  // namespace

double equilibrium_residual(const RadialField& field, double r) {
  check_evaluable(field, r);
  const double sp = field.s_par()(r);
  const double st = field.s_perp()(r);
  return field.s_par().derivative(r) + 2.0 * (sp - st) / r;
}

RadialProfile perp_from_par(const RadialProfile& s_par,
                            std::optional<RadialProfile::Function> second_derivative,
                            double fd_step) {
  RadialProfile::Function d2;
  if (second_derivative) {
    d2 = *second_derivative;
  } else {
    d2 = [s_par, fd_step](double r) {
      return (s_par.derivative(r + fd_step) - s_par.derivative(r - fd_step)) / (2.0 * fd_step);
    };
  }
  return RadialProfile([s_par](double r) { return s_par(r) + 0.5 * r * s_par.derivative(r); },
                       [s_par, d2](double r) { return 1.5 * s_par.derivative(r) + 0.5 * r * d2(r); },
                       s_par.breakpoints(), s_par.panel_hint());
}

double gradient_norm_sq(const RadialField& field, double r) {
  check_evaluable(field, r);
  const double a = field.s_par().derivative(r);
  const double b = field.s_perp().derivative(r);
  return 2.0 * (a * a + b * b);
}

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw Error(ErrorKind::kInvalidArgument, "spline: size mismatch");
  if (n < 4) throw Error(ErrorKind::kInvalidArgument, "spline: need at least 4 knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw Error(ErrorKind::kInvalidArgument, "spline: knots must increase");
  }

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  entries.reserve(3 * n + 6);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  const auto idx = [](std::size_t i) { return static_cast<int>(i); };

  // Not-a-knot: third derivative continuous across the second and penultimate knots.
  entries.emplace_back(0, 0, h[1]);
  entries.emplace_back(0, 1, -(h[0] + h[1]));
  entries.emplace_back(0, 2, h[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    entries.emplace_back(idx(i), idx(i - 1), h[i - 1]);
    entries.emplace_back(idx(i), idx(i), 2.0 * (h[i - 1] + h[i]));
    entries.emplace_back(idx(i), idx(i + 1), h[i]);
    rhs[idx(i)] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
  }
  entries.emplace_back(idx(n - 1), idx(n - 3), h[n - 2]);
  entries.emplace_back(idx(n - 1), idx(n - 2), -(h[n - 3] + h[n - 2]));
  entries.emplace_back(idx(n - 1), idx(n - 1), h[n - 3]);

  Eigen::SparseMatrix<double> a(idx(n), idx(n));
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::kInvalidArgument, "spline: singular system");
  Eigen::VectorXd m = lu.solve(rhs);
  m_.assign(m.data(), m.data() + m.size());
}

std::size_t CubicSpline::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::value(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - x;
  const double b = x - x_[i];
  return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

double CubicSpline::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - x;
  const double b = x - x_[i];
  return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) + (y_[i + 1] - y_[i]) / h -
         (m_[i + 1] - m_[i]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
}

}  // namespace resbasis
