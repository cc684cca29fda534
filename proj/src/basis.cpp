#include "resbasis/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "resbasis/errors.hpp"

namespace resbasis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormTarget = 1.0 / (4.0 * kPi);

void check_radius(const ShellGeometry& g, double r) {
  if (!g.contains(r)) {
    std::ostringstream os;
    os << "radius " << r << " is outside the shell [" << g.r_inner << ", " << g.r_outer << "]";
    throw Error(ErrorKind::kDomain, os.str());
  }
}

int panels_for(double omega, const ShellGeometry& g, const QuadratureSpec& spec) {
  const int half_periods = static_cast<int>(std::ceil(omega * g.width() / kPi));
  return std::max(spec.base_panels, 4 * std::max(1, half_periods));
}

// Shape functions of S_par and S_perp in units of c0 / w^3, one per c1..c4.
struct Shapes {
  std::array<double, 4> par;
  std::array<double, 4> par_d1;
  std::array<double, 4> perp;
};

Shapes shapes(double omega, double r_outer, double r) {
  const double wr = omega * r;
  const double cs = std::cos(wr), sn = std::sin(wr);
  const double u = 1.0 / (r * r * r);
  const double a = wr * cs - sn, da = -omega * wr * sn;
  const double b = cs + wr * sn, db = omega * wr * cs;
  const double ro3 = 1.0 / (r_outer * r_outer * r_outer);
  Shapes s;
  s.par = {u, a * u, b * u, ro3};
  s.par_d1 = {-3.0 * u / r, (da - 3.0 * a / r) * u, (db - 3.0 * b / r) * u, 0.0};
  for (std::size_t j = 0; j < 4; ++j) s.perp[j] = s.par[j] + 0.5 * r * s.par_d1[j];
  return s;
}

// Evaluates the mode equations. The 4x4 norm matrix depends on omega only and
// is cached, so Jacobian columns for c0..c4 reuse it.
class ModeSystem {
 public:
  ModeSystem(const ShellGeometry& geometry, const QuadratureSpec& spec, double omega_hint)
      : geometry_(geometry),
        spec_(spec),
        nodes_(composite_nodes(geometry, {}, panels_for(omega_hint, geometry, spec),
                               spec.nodes_per_panel)) {}

  ModeVector operator()(const ModeVector& x, double p) const {
    const double c0 = x[0], omega = x[5];
    const Eigen::Vector4d c(x[1], x[2], x[3], x[4]);
    const double scale = c0 / (omega * omega * omega);
    const double ri = geometry_.r_inner, ro = geometry_.r_outer;
    const double ro3 = ro * ro * ro;

    ModeVector out;
    const Shapes si = shapes(omega, ro, ri);
    const Shapes so = shapes(omega, ro, ro);
    const Eigen::Map<const Eigen::Vector4d> fi(si.par.data()), fo(so.par.data());
    const Eigen::Map<const Eigen::Vector4d> di(si.par_d1.data()), dO(so.par_d1.data());
    out[0] = scale * c.dot(fi);
    out[1] = scale * c.dot(fo);
    out[2] = c0 * ri / omega * (c[0] / (ri * ri * ri) + c[3] / ro3) - p * scale * c.dot(di);
    out[3] = c0 * ro / omega * (c[0] / ro3 + c[3] / ro3) - p * scale * c.dot(dO);
    out[4] = scale * scale * c.dot(norm_matrix(omega) * c) - kNormTarget;
    out[5] = c.squaredNorm() - 1.0;
    return out;
  }

  const Eigen::Matrix4d& norm_matrix(double omega) const {
    if (omega != cached_omega_) {
      Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
      for (std::size_t i = 0; i < nodes_.r.size(); ++i) {
        const double r = nodes_.r[i];
        const double w = nodes_.w[i] * radial_weight(spec_.weight, r);
        const Shapes s = shapes(omega, geometry_.r_outer, r);
        const Eigen::Map<const Eigen::Vector4d> f(s.par.data()), h(s.perp.data());
        q.noalias() += w * (f * f.transpose() + 2.0 * h * h.transpose());
      }
      cached_q_ = q;
      cached_omega_ = omega;
    }
    return cached_q_;
  }

 private:
  ShellGeometry geometry_;
  QuadratureSpec spec_;
  NodeSet nodes_;
  mutable double cached_omega_ = std::numeric_limits<double>::quiet_NaN();
  mutable Eigen::Matrix4d cached_q_;
};

// Fixes c0 > 0 given the rest, from the norm equation.
double normalizing_c0(const ModeSystem& system, const Eigen::Vector4d& c, double omega) {
  const double quad = c.dot(system.norm_matrix(omega) * c);
  return std::pow(omega, 3) * std::sqrt(kNormTarget / quad);
}

ModeConstants solve_p0_from(int index_n, double omega0, const ShellGeometry& geometry,
                            const SolverOptions& options) {
  const ModeSystem system(geometry, options.quadrature, omega0);
  const Eigen::Vector4d c_guess(0.0, 0.0, 1.0, 0.0);

  // Reduced unknowns (c0, c2, c3, w); c1 = c4 = 0 at p = 0.
  auto expand = [](const Eigen::VectorXd& y) {
    ModeVector x;
    x << y[0], 0.0, y[1], y[2], 0.0, y[3];
    return x;
  };
  VectorFunction reduced = [&](const Eigen::VectorXd& y) {
    const ModeVector r = system(expand(y), 0.0);
    Eigen::VectorXd out(4);
    out << r[0], r[1], r[4], r[5];
    return out;
  };

  Eigen::VectorXd y0(4);
  y0 << normalizing_c0(system, c_guess, omega0), 0.0, 1.0, omega0;
  const NewtonResult res = newton_solve(reduced, y0, options.newton);

  ModeConstants out = unpack(expand(res.x), index_n);
  if (out.c[3] < 0.0) {
    // (c0, c) and (-c0, -c) describe the same field.
    for (double& v : out.c) v = -v;
  }
  if (out.c[0] < 0.0) out.c[0] = -out.c[0];  // the mirror mode -S
  if (!(out.omega > 0.0)) {
    throw Error(ErrorKind::kNonConvergence, "p = 0 solve converged to a non-positive frequency");
  }
  return out;
}

double sup_norm(const ModeVector& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::string> strip_violation(const FunctionalParams& params, bool strict) {
  const double p = params.p, k = params.k;
  if (!std::isfinite(p) || !std::isfinite(k)) return "p and k must be finite";
  if (strict) {
    if (!(p > 0.0)) return "p > 0 (beta + gamma > 0) is violated";
    if (!(p < 5.0)) return "p < 5 (beta + gamma < 5) is violated";
    if (!(k > 0.0)) return "k > 0 (2 beta - gamma > 0) is violated";
    return std::nullopt;
  }
  if (p < 0.0) return "p >= 0 (beta + gamma >= 0) is violated";
  if (p > 5.0) return "p ≤ 5 (beta + gamma <= 5) is violated";
  if (k < 0.0) return "k >= 0 (2 beta - gamma >= 0) is violated";
  return std::nullopt;
}

void validate_params(const FunctionalParams& params, bool strict) {
  if (auto msg = strip_violation(params, strict)) {
    throw Error(ErrorKind::kInvalidArgument, "parameters outside the viable strip: " + *msg);
  }
}

ModeVector pack(const ModeConstants& m) {
  ModeVector x;
  x << m.c[0], m.c[1], m.c[2], m.c[3], m.c[4], m.omega;
  return x;
}

ModeConstants unpack(const ModeVector& x, int index_n) {
  ModeConstants m;
  m.index_n = index_n;
  for (std::size_t i = 0; i < 5; ++i) m.c[i] = x[static_cast<Eigen::Index>(i)];
  m.omega = x[5];
  return m;
}

std::array<double, 5> par_derivatives(const ModeConstants& m, const ShellGeometry& geometry,
                                      double r) {
  const double w = m.omega;
  const double c1 = m.c[1], c2 = m.c[2], c3 = m.c[3], c4 = m.c[4];
  const double wr = w * r;
  const double cs = std::cos(wr), sn = std::sin(wr);
  const double h = c3 * cs - c2 * sn;
  const double q = c3 * sn + c2 * cs;
  const double w2 = w * w;

  // g = c2 (w r cos - sin) + c3 (cos + w r sin) and its derivatives.
  const std::array<double, 5> g = {
      (c2 * wr + c3) * cs - (c2 - c3 * wr) * sn,
      w2 * r * h,
      w2 * (h - wr * q),
      w2 * (-2.0 * w * q - w2 * r * h),
      w2 * (-3.0 * w2 * h + w2 * wr * q),
  };
  // u = r^-3 and its derivatives.
  std::array<double, 5> u{};
  u[0] = 1.0 / (r * r * r);
  for (int k = 1; k < 5; ++k) u[static_cast<std::size_t>(k)] = -(2.0 + k) * u[static_cast<std::size_t>(k - 1)] / r;

  static constexpr int kBinom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  const double scale = m.c[0] / (w2 * w);
  const double ro = geometry.r_outer;
  std::array<double, 5> out{};
  for (std::size_t n = 0; n < 5; ++n) {
    double ug = 0.0;
    for (std::size_t k = 0; k <= n; ++k) ug += kBinom[n][k] * u[k] * g[n - k];
    out[n] = scale * (c1 * u[n] + ug + (n == 0 ? c4 / (ro * ro * ro) : 0.0));
  }
  return out;
}

StressPair eval_mode(const ModeConstants& constants, const FunctionalParams&,
                     const ShellGeometry& geometry, double r) {
  check_radius(geometry, r);
  const auto d = par_derivatives(constants, geometry, r);
  return {d[0], d[0] + 0.5 * r * d[1]};
}

namespace {

double g_value(const ModeConstants& m, double r) {
  const double wr = m.omega * r;
  return (m.c[3] + m.c[2] * wr) * std::cos(wr) - (m.c[2] - m.c[3] * wr) * std::sin(wr);
}

}  // namespace

double eval_mu(const ModeConstants& m, const FunctionalParams& params,
               const ShellGeometry& geometry, double r) {
  check_radius(geometry, r);
  const double ro3 = std::pow(geometry.r_outer, 3);
  const double one_minus_beta = 1.0 - params.beta();
  return -m.c[0] / (2.0 * m.omega * r * r) *
         (m.c[1] - 2.0 * m.c[4] * r * r * r / ro3 + one_minus_beta * g_value(m, r));
}

double eval_mu_derivative(const ModeConstants& m, const FunctionalParams& params,
                          const ShellGeometry& geometry, double r) {
  check_radius(geometry, r);
  const double w = m.omega;
  const double wr = w * r;
  const double ro3 = std::pow(geometry.r_outer, 3);
  const double g = g_value(m, r);
  const double dg = w * w * r * (m.c[3] * std::cos(wr) - m.c[2] * std::sin(wr));
  const double one_minus_beta = 1.0 - params.beta();
  return -m.c[0] / (2.0 * w) *
         (-2.0 * m.c[1] / (r * r * r) - 2.0 * m.c[4] / ro3 +
          one_minus_beta * (dg / (r * r) - 2.0 * g / (r * r * r)));
}

MuParts mu_parts(const ModeConstants& m, double p, const ShellGeometry& geometry, double r) {
  check_radius(geometry, r);
  const double ro3 = std::pow(geometry.r_outer, 3);
  MuParts out;
  out.f1 = m.c[0] * g_value(m, r) / (6.0 * m.omega * r * r);
  out.f2 = -m.c[0] / (m.omega * r * r) * (0.5 * m.c[1] - m.c[4] * r * r * r / ro3) +
           (p - 3.0) * out.f1;
  return out;
}

ModeVector residual_system(const ModeVector& x, double p, const ShellGeometry& geometry,
                           const QuadratureSpec& spec) {
  const ModeSystem system(geometry, spec, x[5]);
  return system(x, p);
}

ModeConstants solve_p0(int index_n, const ShellGeometry& geometry, const SolverOptions& options,
                       std::span<const double> known_omegas) {
  if (index_n < 1) throw Error(ErrorKind::kInvalidArgument, "mode index must be >= 1");
  const double omega0 = index_n * kPi / geometry.width();
  const double reseed = kPi / (2.0 * geometry.width());

  auto is_duplicate = [&](double omega) {
    return std::any_of(known_omegas.begin(), known_omegas.end(),
                       [&](double w) { return std::abs(w - omega) <= options.duplicate_tol; });
  };

  // Seeds: w0, then w0 + d, w0 - d, w0 + 2d, w0 - 2d, ...
  for (int attempt = 0; attempt <= options.max_reseeds; ++attempt) {
    const int magnitude = (attempt + 1) / 2;
    const double sign = attempt % 2 == 1 ? 1.0 : -1.0;
    const double seed = omega0 + sign * magnitude * reseed;
    ModeConstants m;
    try {
      m = solve_p0_from(index_n, seed, geometry, options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNonConvergence || attempt == options.max_reseeds) throw;
      continue;
    }
    if (!is_duplicate(m.omega)) {
      const double sup = sup_norm(residual_system(pack(m), 0.0, geometry, options.quadrature));
      if (sup > options.newton.accept_tol) {
        throw Error(ErrorKind::kNonConvergence, "p = 0 mode fails the full residual system");
      }
      return m;
    }
  }
  throw Error(ErrorKind::kDuplicateRoot,
              "mode " + std::to_string(index_n) + " keeps converging onto a lower mode");
}

std::vector<ModeConstants> solve_p0_sequence(int count, const ShellGeometry& geometry,
                                             const SolverOptions& options) {
  std::vector<ModeConstants> modes;
  std::vector<double> omegas;
  modes.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int n = 1; n <= count; ++n) {
    ModeConstants m = solve_p0(n, geometry, options, omegas);
    if (!omegas.empty() && !(m.omega > omegas.back())) {
      throw Error(ErrorKind::kDuplicateRoot,
                  "mode " + std::to_string(n) + " is not above mode " + std::to_string(n - 1));
    }
    omegas.push_back(m.omega);
    modes.push_back(m);
  }
  return modes;
}

ModeConstants refine_mode(const ModeConstants& seed, double p, const ShellGeometry& geometry,
                          const SolverOptions& options) {
  const ModeSystem system(geometry, options.quadrature, seed.omega);
  VectorFunction f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return system(ModeVector(x), p);
  };
  const NewtonResult res = newton_solve(f, pack(seed), options.newton);
  return unpack(ModeVector(res.x), seed.index_n);
}

ModeConstants continue_in_p(const ModeConstants& start, double p_target,
                            const ShellGeometry& geometry, const SolverOptions& options,
                            double p_start) {
  if (p_target == p_start) return start;
  const ModeSystem system(geometry, options.quadrature, start.omega);
  const double direction = p_target > p_start ? 1.0 : -1.0;

  ModeVector x = pack(start);
  double p = p_start;
  double step = options.continuation_initial_step;

  while (p != p_target) {
    const double h = std::min(step, std::abs(p_target - p));
    const double p_next = std::abs(p_target - p) <= h ? p_target : p + direction * h;

    VectorFunction at_p = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      return system(ModeVector(v), p);
    };
    const Eigen::MatrixXd jac = fd_jacobian(at_p, x, options.newton.fd_relative_step);
    const double hp = options.newton.fd_relative_step * std::max(1.0, std::abs(p));
    const ModeVector b = -(system(x, p + hp) - system(x, p - hp)) / (2.0 * hp);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                 : std::numeric_limits<double>::infinity();
    if (cond > options.max_condition) {
      std::ostringstream os;
      os << "continuation: Jacobian condition number " << cond << " at p = " << p
         << " (branch degeneracy)";
      throw Error(ErrorKind::kSingularJacobian, os.str());
    }
    const ModeVector v = svd.solve(b);
    const ModeVector predicted = x + (p_next - p) * v;

    VectorFunction at_next = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
      return system(ModeVector(y), p_next);
    };
    std::optional<NewtonResult> corrected;
    try {
      corrected = newton_solve(at_next, predicted, options.newton);
    } catch (const Error& e) {
      if (!e.is_numerical()) throw;
    }
    // Reject corrections that wander off the predicted branch point.
    const bool on_branch =
        corrected && std::abs(corrected->x[5] - predicted[5]) < 0.05 * (1.0 + h) * predicted[5] &&
        corrected->x[0] * x[0] > 0.0;
    if (!on_branch) {
      step *= 0.5;
      if (step < options.continuation_min_step) {
        std::ostringstream os;
        os << "continuation: corrector failed near p = " << p;
        throw Error(ErrorKind::kNonConvergence, os.str());
      }
      continue;
    }
    x = ModeVector(corrected->x);
    p = p_next;
    if (corrected->iterations <= 3) step = std::min(step * 1.5, options.continuation_max_step);
  }
  return unpack(x, start.index_n);
}

BasisMode make_mode(const ModeConstants& constants, const FunctionalParams& params,
                    const ShellGeometry& geometry) {
  const int hint = panels_for(constants.omega, geometry, QuadratureSpec{});
  RadialProfile par(
      [constants, geometry](double r) { return par_derivatives(constants, geometry, r)[0]; },
      [constants, geometry](double r) { return par_derivatives(constants, geometry, r)[1]; }, {},
      hint);
  RadialProfile perp(
      [constants, geometry](double r) {
        const auto d = par_derivatives(constants, geometry, r);
        return d[0] + 0.5 * r * d[1];
      },
      [constants, geometry](double r) {
        const auto d = par_derivatives(constants, geometry, r);
        return 1.5 * d[1] + 0.5 * r * d[2];
      },
      {}, hint);
  return BasisMode{constants, params, geometry, RadialField(std::move(par), std::move(perp), geometry)};
}

std::vector<BasisMode> solve_modes(int count, const FunctionalParams& params,
                                   const ShellGeometry& geometry, const SolverOptions& options) {
  validate_params(params);
  const auto base = solve_p0_sequence(count, geometry, options);
  std::vector<BasisMode> modes;
  modes.reserve(base.size());
  double previous = 0.0;
  for (const auto& b : base) {
    const ModeConstants m = continue_in_p(b, params.p, geometry, options);
    if (!(m.omega > previous)) {
      throw Error(ErrorKind::kDuplicateRoot,
                  "continued modes lost their ordering at mode " + std::to_string(m.index_n));
    }
    previous = m.omega;
    modes.push_back(make_mode(m, params, geometry));
  }
  return modes;
}

StressPair el_residual(const BasisMode& mode, double r) {
  return el_residual(mode, r, mode.constants.lambda());
}

StressPair el_residual(const BasisMode& mode, double r, double lambda) {
  const ShellGeometry& g = mode.geometry;
  check_radius(g, r);
  const auto d = par_derivatives(mode.constants, g, r);
  const double s = d[0], s1 = d[1], s2 = d[2], s3 = d[3];
  const double t = s + 0.5 * r * s1;
  const double t1 = 1.5 * s1 + 0.5 * r * s2;
  const double t2 = 2.0 * s2 + 0.5 * r * s3;
  const double beta = mode.params.beta();
  const double mu = eval_mu(mode.constants, mode.params, g, r);
  const double dmu = eval_mu_derivative(mode.constants, mode.params, g, r);

  const double lap_trace = s2 + 2.0 * t2 + 2.0 * (s1 + 2.0 * t1) / r;
  StressPair out;
  out.par = -0.5 * (1.0 - beta) * lap_trace - beta * (s2 + 2.0 * s1 / r - 4.0 * (s - t) / (r * r)) +
            dmu - lambda * s;
  out.perp = -0.5 * (1.0 - beta) * lap_trace -
             beta * (t2 + 2.0 * t1 / r + 2.0 * (s - t) / (r * r)) + mu / r - lambda * t;
  return out;
}

double natural_bc_residual(const BasisMode& mode, double r) {
  check_radius(mode.geometry, r);
  const auto d = par_derivatives(mode.constants, mode.geometry, r);
  return r * d[2] - (mode.params.p - 4.0) * d[1];
}

}  // namespace resbasis
