#include "resbasis/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "resbasis/errors.hpp"

namespace resbasis {

std::string_view to_string(NormWeight weight) {
  return weight == NormWeight::kR2 ? "r2" : "paper";
}

NormWeight parse_norm_weight(std::string_view text) {
  if (text == "r2") return NormWeight::kR2;
  if (text == "paper" || text == "paper-literal") return NormWeight::kPaperLiteral;
  throw Error(ErrorKind::kInvalidArgument, "unknown norm weight '" + std::string(text) +
                                               "' (expected r2 or paper)");
}

double radial_weight(NormWeight weight, double r) {
  return weight == NormWeight::kR2 ? r * r : 1.0;
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || base_panels < 1 || nodes_per_panel < 2 ||
      max_panels < base_panels) {
    throw Error(ErrorKind::kInvalidArgument,
                "quadrature spec needs abs_tol > 0, rel_tol > 0, base_panels >= 1, "
                "nodes_per_panel >= 2");
  }
}

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

std::vector<double> segment_edges(const ShellGeometry& g, std::span<const double> breakpoints) {
  std::vector<double> edges{g.r_inner};
  for (double b : breakpoints) {
    if (b > edges.back() && b < g.r_outer) edges.push_back(b);
  }
  edges.push_back(g.r_outer);
  return edges;
}

double composite(const std::function<double(double)>& f, double a, double b, int panels,
                 const GaussLegendreRule& rule) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      s += rule.weights[j] * f(mid + 0.5 * h * rule.nodes[j]);
    }
    total += 0.5 * h * s;
  }
  return total;
}

void require_smooth(const RadialField& field, const char* what) {
  if (field.has_breakpoints()) {
    throw Error(ErrorKind::kDiscontinuousField,
                std::string(what) + " is undefined for a field with discontinuities");
  }
}

}  // namespace

double integrate(const std::function<double(double)>& f, const ShellGeometry& geometry,
                 std::span<const double> breakpoints, const QuadratureSpec& spec, int min_panels) {
  spec.validate();
  const auto& rule = gauss_legendre(spec.nodes_per_panel);
  const auto edges = segment_edges(geometry, breakpoints);
  int panels_used = 0;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    int panels = std::max(spec.base_panels, min_panels);
    double coarse = composite(f, edges[s], edges[s + 1], panels, rule);
    for (;;) {
      if (panels_used + 3 * panels > spec.max_panels) {
        throw Error(ErrorKind::kNonConvergence,
                    "quadrature did not converge within " + std::to_string(spec.max_panels) +
                        " panels");
      }
      const double fine = composite(f, edges[s], edges[s + 1], 2 * panels, rule);
      const bool done = std::abs(fine - coarse) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(fine));
      coarse = fine;
      panels *= 2;
      if (done) break;
    }
    panels_used += panels;
    total += coarse;
  }
  return total;
}

NodeSet composite_nodes(const ShellGeometry& geometry, std::span<const double> breakpoints,
                        int panels_per_segment, int nodes_per_panel) {
  const auto& rule = gauss_legendre(nodes_per_panel);
  const auto edges = segment_edges(geometry, breakpoints);
  NodeSet set;
  const std::size_t total = (edges.size() - 1) * static_cast<std::size_t>(panels_per_segment) *
                            rule.nodes.size();
  set.r.reserve(total);
  set.w.reserve(total);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double h = (edges[s + 1] - edges[s]) / panels_per_segment;
    for (int p = 0; p < panels_per_segment; ++p) {
      const double mid = edges[s] + (p + 0.5) * h;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        set.r.push_back(mid + 0.5 * h * rule.nodes[j]);
        set.w.push_back(0.5 * h * rule.weights[j]);
      }
    }
  }
  return set;
}

double l2_inner(const RadialField& a, const RadialField& b, const QuadratureSpec& spec) {
  if (!(a.geometry() == b.geometry())) {
    throw Error(ErrorKind::kGeometryMismatch, "l2_inner: fields live on different shells");
  }
  std::vector<double> bps;
  std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
             b.breakpoints().end(), std::back_inserter(bps));
  const NormWeight wm = spec.weight;
  auto integrand = [&](double r) {
    return (a.s_par()(r) * b.s_par()(r) + 2.0 * a.s_perp()(r) * b.s_perp()(r)) * radial_weight(wm, r);
  };
  const int hint = std::max(a.panel_hint(), b.panel_hint());
  return 4.0 * std::numbers::pi * integrate(integrand, a.geometry(), bps, spec, hint);
}

double h1_error_sq(const RadialField& diff, const QuadratureSpec& spec) {
  require_smooth(diff, "H1 norm");
  const NormWeight wm = spec.weight;
  auto integrand = [&](double r) {
    const double dp = diff.s_par().derivative(r);
    const double dt = diff.s_perp().derivative(r);
    return (diff.norm_sq_density(r) + 2.0 * (dp * dp + dt * dt)) * radial_weight(wm, r);
  };
  return 4.0 * std::numbers::pi * integrate(integrand, diff.geometry(), {}, spec, diff.panel_hint());
}

double energy(const RadialField& field, double p, const QuadratureSpec& spec) {
  require_smooth(field, "energy");
  const NormWeight wm = spec.weight;
  auto integrand = [&](double r) {
    const double dp = field.s_par().derivative(r);
    const double dt = field.s_perp().derivative(r);
    const double tr = dp + 2.0 * dt;
    return (0.5 * tr * tr + p * (1.5 * dp * dp - 2.0 * dp * dt)) * radial_weight(wm, r);
  };
  return 2.0 * std::numbers::pi *
         integrate(integrand, field.geometry(), {}, spec, field.panel_hint());
}

double energy_inner(const RadialField& a, const RadialField& b, double p,
                    const QuadratureSpec& spec) {
  return energy(a + b, p, spec) - energy(a, p, spec) - energy(b, p, spec);
}

}  // namespace resbasis
