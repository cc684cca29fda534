#include "resbasis/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "resbasis/errors.hpp"

namespace resbasis {

namespace {

void check_modes(const RadialField& target, std::span<const BasisMode> modes) {
  for (const auto& m : modes) {
    if (!(m.geometry == target.geometry())) {
      throw Error(ErrorKind::kGeometryMismatch, "target and basis live on different shells");
    }
    if (m.params.p != modes.front().params.p || !(m.geometry == modes.front().geometry)) {
      throw Error(ErrorKind::kMixedParameters, "basis modes were solved at different parameters");
    }
  }
}

}  // namespace

std::vector<double> project(const RadialField& target, std::span<const BasisMode> modes,
                            const QuadratureSpec& spec) {
  check_modes(target, modes);
  std::vector<double> b;
  b.reserve(modes.size());
  for (const auto& m : modes) b.push_back(l2_inner(target, m.field, spec));
  return b;
}

ErrorCurves error_curves(const RadialField& target, std::span<const BasisMode> modes,
                         std::span<const double> coefficients, const QuadratureSpec& spec) {
  check_modes(target, modes);
  if (coefficients.size() > modes.size()) {
    throw Error(ErrorKind::kInvalidArgument, "more coefficients than basis modes");
  }
  const std::size_t n_max = coefficients.size();
  const bool smooth = !target.has_breakpoints();
  const int panels = std::max({spec.base_panels, target.panel_hint(),
                               4 * static_cast<int>(std::max<std::size_t>(n_max, 1))});
  const NodeSet nodes =
      composite_nodes(target.geometry(), target.breakpoints(), panels, spec.nodes_per_panel);
  const std::size_t m = nodes.r.size();

  std::vector<double> w(m), rp(m), rt(m), dp(m), dt(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = nodes.r[i];
    w[i] = 4.0 * std::numbers::pi * nodes.w[i] * radial_weight(spec.weight, r);
    rp[i] = target.s_par()(r);
    rt[i] = target.s_perp()(r);
    if (smooth) {
      dp[i] = target.s_par().derivative(r);
      dt[i] = target.s_perp().derivative(r);
    }
  }
  auto l2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w[i] * (rp[i] * rp[i] + 2.0 * rt[i] * rt[i]);
    return s;
  };
  auto h1 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      s += w[i] * (rp[i] * rp[i] + 2.0 * rt[i] * rt[i] + 2.0 * (dp[i] * dp[i] + dt[i] * dt[i]));
    }
    return s;
  };

  const double l2_ref = l2();
  const double h1_ref = smooth ? h1() : 0.0;
  if (!(l2_ref > 0.0)) {
    throw Error(ErrorKind::kNonpositiveValue, "relative errors need a nonzero target");
  }

  ErrorCurves out;
  out.e_l2.reserve(n_max);
  if (smooth) out.e_h1.emplace().reserve(n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    const ModeConstants& c = modes[n].constants;
    const double b = coefficients[n];
    for (std::size_t i = 0; i < m; ++i) {
      const double r = nodes.r[i];
      const auto d = par_derivatives(c, modes[n].geometry, r);
      rp[i] -= b * d[0];
      rt[i] -= b * (d[0] + 0.5 * r * d[1]);
      if (smooth) {
        dp[i] -= b * d[1];
        dt[i] -= b * (1.5 * d[1] + 0.5 * r * d[2]);
      }
    }
    out.e_l2.push_back(std::sqrt(std::max(l2(), 0.0) / l2_ref));
    if (smooth) out.e_h1->push_back(std::sqrt(std::max(h1(), 0.0) / h1_ref));
  }
  return out;
}

double decay_slope(std::span<const double> indices, std::span<const double> values) {
  if (indices.size() != values.size() || indices.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "decay slope needs at least two (index, value) pairs");
  }
  const double n = static_cast<double>(values.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !(indices[i] > 0.0)) {
      throw Error(ErrorKind::kNonpositiveValue,
                  "decay slope: nonpositive value at index " + std::to_string(indices[i]));
    }
    const double x = std::log(indices[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

void check_window(std::size_t size, int lo, int hi) {
  if (lo < 1 || hi - lo + 1 < 10 || static_cast<std::size_t>(hi) > size) {
    throw Error(ErrorKind::kInvalidArgument,
                "slope window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                    "] must lie in [1, " + std::to_string(size) + "] and hold at least 10 points");
  }
}

double window_slope(std::span<const double> series, int lo, int hi, int parity) {
  check_window(series.size(), lo, hi);
  std::vector<double> x, y;
  for (int n = lo; n <= hi; ++n) {
    if (parity >= 0 && n % 2 != parity) continue;
    x.push_back(n);
    y.push_back(series[static_cast<std::size_t>(n - 1)]);
  }
  return decay_slope(x, y);
}

}  // namespace

double decay_slope(std::span<const double> series, int lo, int hi) {
  return window_slope(series, lo, hi, -1);
}

double decay_slope_parity(std::span<const double> series, int lo, int hi, bool odd) {
  return window_slope(series, lo, hi, odd ? 1 : 0);
}

RadialField reconstruct(std::span<const BasisMode> modes, std::span<const double> coefficients,
                        std::size_t n) {
  if (n > modes.size() || n > coefficients.size()) {
    throw Error(ErrorKind::kInvalidArgument, "reconstruction needs n <= number of modes");
  }
  if (n == 0) {
    if (modes.empty()) throw Error(ErrorKind::kInvalidArgument, "empty basis");
    return RadialField::zero(modes.front().geometry);
  }
  struct Term {
    double b;
    ModeConstants c;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (std::size_t i = 0; i < n; ++i) terms->push_back({coefficients[i], modes[i].constants});
  const ShellGeometry g = modes.front().geometry;
  const int hint = std::max(modes[n - 1].field.panel_hint(), 1);

  auto sum = [terms, g](double r, int order) {
    double s = 0.0;
    for (const auto& t : *terms) {
      const auto d = par_derivatives(t.c, g, r);
      switch (order) {
        case 0: s += t.b * d[0]; break;
        case 1: s += t.b * d[1]; break;
        case 2: s += t.b * (d[0] + 0.5 * r * d[1]); break;
        default: s += t.b * (1.5 * d[1] + 0.5 * r * d[2]); break;
      }
    }
    return s;
  };
  RadialProfile par([sum](double r) { return sum(r, 0); }, [sum](double r) { return sum(r, 1); },
                    {}, hint);
  RadialProfile perp([sum](double r) { return sum(r, 2); }, [sum](double r) { return sum(r, 3); },
                     {}, hint);
  return RadialField(std::move(par), std::move(perp), g);
}

double gibbs_overshoot(const RadialField& target, const RadialField& approx, double center,
                       double half_width, int samples) {
  if (samples < 2 || !(half_width > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "overshoot window needs samples >= 2, half_width > 0");
  }
  const ShellGeometry& g = target.geometry();
  const double lo = std::max(g.r_inner, center - half_width);
  const double hi = std::min(g.r_outer, center + half_width);
  double tmax = -INFINITY, tmin = INFINITY, amax = -INFINITY, amin = INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double r = lo + (hi - lo) * i / (samples - 1);
    const double t = target.s_perp()(r);
    const double a = approx.s_perp()(r);
    tmax = std::max(tmax, t);
    tmin = std::min(tmin, t);
    amax = std::max(amax, a);
    amin = std::min(amin, a);
  }
  return std::max(amax - tmax, tmin - amin);
}

FitReport fit(const RadialField& target, std::span<const BasisMode> modes,
              const QuadratureSpec& spec, int window_lo, int window_hi) {
  if (modes.empty()) throw Error(ErrorKind::kInvalidArgument, "fit needs at least one mode");
  FitReport rep;
  rep.params = modes.front().params;
  rep.norm_weight = spec.weight;
  rep.n_max = static_cast<int>(modes.size());
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.coefficients = project(target, modes, spec);
  ErrorCurves curves = error_curves(target, modes, rep.coefficients, spec);
  rep.e_l2 = std::move(curves.e_l2);
  rep.e_h1 = std::move(curves.e_h1);

  const int hi = std::min(window_hi, rep.n_max);
  if (window_lo >= 1 && hi - window_lo + 1 >= 10) {
    std::vector<double> abs_b(rep.coefficients.size());
    std::transform(rep.coefficients.begin(), rep.coefficients.end(), abs_b.begin(),
                   [](double v) { return std::abs(v); });
    auto guarded = [](auto&& f) -> std::optional<double> {
      try {
        return f();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNonpositiveValue) throw;
        return std::nullopt;
      }
    };
    rep.slopes.e_l2 = guarded([&] { return decay_slope(rep.e_l2, window_lo, hi); });
    if (rep.e_h1) rep.slopes.e_h1 = guarded([&] { return decay_slope(*rep.e_h1, window_lo, hi); });
    rep.slopes.b_odd = guarded([&] { return decay_slope_parity(abs_b, window_lo, hi, true); });
    rep.slopes.b_even = guarded([&] { return decay_slope_parity(abs_b, window_lo, hi, false); });
  }
  return rep;
}

}  // namespace resbasis
