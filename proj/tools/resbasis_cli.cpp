// resbasis: spherically symmetric residual-stress bases on a shell.
//
//   resbasis modes  --p P --k K --n N --out-json PATH [--out-csv PATH --samples M]
//   resbasis verify --p P --k K --n N [--tol T]
//   resbasis fit    --field thermoelastic|shrinkfit|csv --p P --k K --n-max N --out PATH
//   resbasis sweep  --what omega|mu --p-min A --p-max B --p-steps S [--k K --n N --r-steps M]
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "resbasis/basis.hpp"
#include "resbasis/candidates.hpp"
#include "resbasis/errors.hpp"
#include "resbasis/fitting.hpp"
#include "resbasis/io.hpp"

namespace {

using namespace resbasis;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  double p = 0.0;
  double k = 0.0;
  double r_inner = 0.5;
  double r_outer = 1.0;
  std::string norm_weight = "r2";
  bool strict = false;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int base_panels = 4;
  int nodes_per_panel = 16;

  void add_to(CLI::App* app, bool with_p = true) {
    if (with_p) app->add_option("--p", p, "strip coordinate p = beta + gamma")->capture_default_str();
    app->add_option("--k", k, "strip coordinate k = 2 beta - gamma")->capture_default_str();
    app->add_option("--ri", r_inner, "inner radius")->capture_default_str();
    app->add_option("--ro", r_outer, "outer radius")->capture_default_str();
    app->add_option("--norm-weight", norm_weight, "radial weight of the L2 norm")
        ->check(CLI::IsMember({"r2", "paper", "paper-literal"}))
        ->capture_default_str();
    app->add_flag("--strict", strict, "require the open strip 0 < p < 5, k > 0");
    app->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance")->capture_default_str();
    app->add_option("--rel-tol", rel_tol, "quadrature relative tolerance")->capture_default_str();
    app->add_option("--base-panels", base_panels, "quadrature panels per segment")
        ->capture_default_str();
    app->add_option("--nodes-per-panel", nodes_per_panel, "Gauss-Legendre nodes per panel")
        ->capture_default_str();
  }

  ShellGeometry geometry() const { return ShellGeometry(r_inner, r_outer); }
  FunctionalParams params() const { return {p, k}; }

  SolverOptions solver() const {
    SolverOptions o;
    o.quadrature.abs_tol = abs_tol;
    o.quadrature.rel_tol = rel_tol;
    o.quadrature.base_panels = base_panels;
    o.quadrature.nodes_per_panel = nodes_per_panel;
    o.quadrature.weight = parse_norm_weight(norm_weight);
    o.quadrature.validate();
    return o;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kInvalidArgument, "cannot open '" + path + "' for writing");
  return os;
}

std::vector<double> uniform_radii(const ShellGeometry& g, int count) {
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    r[static_cast<std::size_t>(i)] =
        count == 1 ? g.r_inner : g.r_inner + g.width() * i / (count - 1);
  }
  return r;
}

std::vector<double> p_grid(double lo, double hi, int steps) {
  std::vector<double> p(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    p[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  }
  return p;
}

// ---------------------------------------------------------------------------
// modes

struct ModesFlags {
  CommonFlags common;
  int n = 1;
  int samples = 101;
  std::string out_json;
  std::string out_csv;
};

int run_modes(const ModesFlags& f) {
  const ShellGeometry g = f.common.geometry();
  const FunctionalParams params = f.common.params();
  validate_params(params, f.common.strict);
  if (f.n < 1) throw Error(ErrorKind::kInvalidArgument, "--n must be at least 1");
  if (f.samples < 2) throw Error(ErrorKind::kInvalidArgument, "--samples must be at least 2");
  const SolverOptions opts = f.common.solver();

  const auto modes = solve_modes(f.n, params, g, opts);
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& m : modes) records.push_back(mode_record(m, opts.quadrature));
  open_output(f.out_json) << records.dump(2) << '\n';

  if (!f.out_csv.empty()) {
    std::ofstream os = open_output(f.out_csv);
    os << "n,r,s_par,s_perp,mu\n";
    for (const auto& m : modes) {
      for (double r : uniform_radii(g, f.samples)) {
        const StressPair s = eval_mode(m.constants, params, g, r);
        const double mu = eval_mu(m.constants, params, g, r);
        const double row[] = {static_cast<double>(m.constants.index_n), r, s.par, s.perp, mu};
        write_csv_row(os, row);
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyFlags {
  CommonFlags common;
  int n = 10;
  double tol = 1e-6;
  int radii = 50;
};

struct CheckRow {
  std::string name;
  double value;
  double tol;
  bool pass() const { return value < tol; }
};

int run_verify(const VerifyFlags& f) {
  if (f.n < 1) throw Error(ErrorKind::kInvalidArgument, "--n must be at least 1 (nothing to verify)");
  if (!(f.tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "--tol must be positive");
  const ShellGeometry g = f.common.geometry();
  const FunctionalParams params = f.common.params();
  validate_params(params, f.common.strict);
  const SolverOptions opts = f.common.solver();
  const QuadratureSpec& q = opts.quadrature;

  const auto modes = solve_modes(f.n, params, g, opts);
  const std::size_t n = modes.size();

  double gram_diag = 0.0, gram_off = 0.0, energy_off = 0.0, energy_diag = 0.0;
  double lambda_max = 0.0;
  for (const auto& m : modes) lambda_max = std::max(lambda_max, m.constants.lambda());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double gij = l2_inner(modes[i].field, modes[j].field, q);
      if (i == j) {
        gram_diag = std::max(gram_diag, std::abs(gij - 1.0));
        const double lam = modes[i].constants.lambda();
        energy_diag = std::max(energy_diag, std::abs(2.0 * energy(modes[i].field, params.p, q) - lam) / lam);
      } else {
        gram_off = std::max(gram_off, std::abs(gij));
        energy_off = std::max(
            energy_off, std::abs(energy_inner(modes[i].field, modes[j].field, params.p, q)) / lambda_max);
      }
    }
  }

  double el_max = 0.0;
  double bc_max = 0.0;
  double system_max = 0.0;
  for (const auto& m : modes) {
    const double lam = m.constants.lambda();
    for (int i = 1; i <= f.radii; ++i) {
      const double r = g.r_inner + g.width() * i / (f.radii + 1);
      const StressPair e = el_residual(m, r);
      el_max = std::max({el_max, std::abs(e.par) / lam, std::abs(e.perp) / lam});
    }
    const double s_in = eval_mode(m.constants, params, g, g.r_inner).par;
    const double s_out = eval_mode(m.constants, params, g, g.r_outer).par;
    const double nb_scale = lam * std::abs(m.constants.c[0]) / m.constants.omega;
    bc_max = std::max({bc_max, std::abs(s_in), std::abs(s_out),
                       std::abs(natural_bc_residual(m, g.r_inner)) / nb_scale,
                       std::abs(natural_bc_residual(m, g.r_outer)) / nb_scale});
    system_max = std::max(
        system_max, residual_system(pack(m.constants), params.p, g, q).lpNorm<Eigen::Infinity>());
  }

  const std::vector<CheckRow> rows = {
      {"gram diagonal |G_NN - 1|", gram_diag, f.tol},
      {"gram off-diagonal max |G_MN|", gram_off, f.tol},
      {"energy off-diagonal / max lambda", energy_off, f.tol},
      {"|2E - lambda| / lambda", energy_diag, f.tol},
      {"Euler-Lagrange residual / lambda", el_max, f.tol},
      {"boundary conditions", bc_max, f.tol},
      {"mode system sup-norm", system_max, f.tol},
  };
  bool ok = true;
  std::printf("%-36s %-14s %-10s %s\n", "check", "value", "tol", "result");
  for (const auto& row : rows) {
    std::printf("%-36s %-14.6e %-10.2e %s\n", row.name.c_str(), row.value, row.tol,
                row.pass() ? "PASS" : "FAIL");
    ok = ok && row.pass();
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// fit

struct FitFlags {
  CommonFlags common;
  std::string field = "thermoelastic";
  int n_max = 100;
  std::optional<double> kappa;
  std::optional<double> mu;
  double alpha = 1.75e-2;
  double c = 1.0 / 9.0;
  double r_m = 0.75;
  double delta = 0.01;
  std::string input;
  std::vector<double> breakpoints;
  std::string r_column = "r";
  std::string par_column = "s_par";
  std::string perp_column = "s_perp";
  std::string out;
  std::string recon_prefix;
  int samples = 401;
  int window_lo = 20;
  int window_hi = 100;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::kInvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RadialField build_target(const FitFlags& f, const ShellGeometry& g) {
  if (f.field == "thermoelastic") {
    ThermoelasticSpec s;
    s.kappa = f.kappa.value_or(2.8);
    s.mu = f.mu.value_or(1.0);
    s.alpha = f.alpha;
    s.c = f.c;
    s.geometry = g;
    return thermoelastic_field(s);
  }
  if (f.field == "shrinkfit") {
    ShrinkFitSpec s;
    s.kappa = f.kappa.value_or(3.0);
    s.mu = f.mu.value_or(1.0);
    s.r_m = f.r_m;
    s.delta = f.delta;
    s.geometry = g;
    return shrinkfit_field(s);
  }
  if (f.input.empty()) throw Error(ErrorKind::kInvalidArgument, "--field csv needs --input PATH");
  SampledField sampled = load_sampled_field(read_file(f.input), g, f.breakpoints,
                                            {f.r_column, f.par_column, f.perp_column});
  for (const auto& w : sampled.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(sampled.field);
}

std::string recon_path(const FitFlags& f, int n) {
  std::string prefix = f.recon_prefix;
  if (prefix.empty()) {
    std::filesystem::path p(f.out);
    prefix = (p.parent_path() / p.stem()).string();
  }
  return prefix + "_n" + std::to_string(n) + ".csv";
}

int run_fit(const FitFlags& f) {
  const ShellGeometry g = f.common.geometry();
  const FunctionalParams params = f.common.params();
  validate_params(params, f.common.strict);
  if (f.n_max < 1) throw Error(ErrorKind::kInvalidArgument, "--n-max must be at least 1");
  if (f.samples < 2) throw Error(ErrorKind::kInvalidArgument, "--samples must be at least 2");
  const SolverOptions opts = f.common.solver();

  const RadialField target = build_target(f, g);
  const auto modes = solve_modes(f.n_max, params, g, opts);
  const FitReport report = fit(target, modes, opts.quadrature, f.window_lo, f.window_hi);
  if (!report.e_h1) std::cerr << "note: H1 errors omitted, target has discontinuities\n";
  open_output(f.out) << fit_report_json(report).dump(2) << '\n';

  for (int n : {3, 10, 100}) {
    if (n > f.n_max) continue;
    const RadialField approx = reconstruct(modes, report.coefficients, static_cast<std::size_t>(n));
    std::ofstream os = open_output(recon_path(f, n));
    os << "r,target_par,target_perp,approx_par,approx_perp\n";
    auto emit = [&](double r_eval, double r_label) {
      const double row[] = {r_label, target.s_par()(r_eval), target.s_perp()(r_eval),
                            approx.s_par()(r_label), approx.s_perp()(r_label)};
      write_csv_row(os, row);
    };
    const auto& bps = target.breakpoints();
    std::vector<double> radii = uniform_radii(g, f.samples);
    radii.insert(radii.end(), bps.begin(), bps.end());
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double r : radii) {
      // A discontinuity gets its left limit first, then the right one.
      if (std::find(bps.begin(), bps.end(), r) != bps.end()) emit(std::nextafter(r, g.r_inner), r);
      emit(r, r);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepFlags {
  CommonFlags common;
  std::string what = "omega";
  double p_min = 0.0;
  double p_max = 5.0;
  int p_steps = 51;
  int n = 4;
  int r_steps = 51;
  std::string out;
};

int run_sweep(const SweepFlags& f) {
  if (f.p_steps < 1) throw Error(ErrorKind::kInvalidArgument, "--p-steps must be at least 1");
  if (!(f.p_min <= f.p_max)) throw Error(ErrorKind::kInvalidArgument, "--p-min must not exceed --p-max");
  if (f.n < 1) throw Error(ErrorKind::kInvalidArgument, "--n must be at least 1");
  if (f.r_steps < 2) throw Error(ErrorKind::kInvalidArgument, "--r-steps must be at least 2");
  validate_params({f.p_min, f.common.k}, f.common.strict);
  validate_params({f.p_max, f.common.k}, f.common.strict);

  const ShellGeometry g = f.common.geometry();
  const SolverOptions opts = f.common.solver();
  const auto grid = p_grid(f.p_min, f.p_max, f.p_steps);

  std::ostringstream os;
  if (f.what == "omega") {
    os << "p,n,omega\n";
    std::vector<ModeConstants> branch = solve_p0_sequence(f.n, g, opts);
    std::vector<double> at(branch.size(), 0.0);
    for (double p : grid) {
      for (std::size_t i = 0; i < branch.size(); ++i) {
        branch[i] = continue_in_p(branch[i], p, g, opts, at[i]);
        at[i] = p;
        const double row[] = {p, static_cast<double>(branch[i].index_n), branch[i].omega};
        write_csv_row(os, row);
      }
    }
  } else {
    os << "p,r,mu\n";
    ModeConstants m = solve_p0_sequence(f.n, g, opts).back();
    double at = 0.0;
    for (double p : grid) {
      m = continue_in_p(m, p, g, opts, at);
      at = p;
      const FunctionalParams params{p, f.common.k};
      for (double r : uniform_radii(g, f.r_steps)) {
        const double row[] = {p, r, eval_mu(m, params, g, r)};
        write_csv_row(os, row);
      }
    }
  }
  if (f.out.empty()) {
    std::cout << os.str();
  } else {
    open_output(f.out) << os.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherically symmetric residual-stress bases on a shell"};
  app.require_subcommand(1);

  ModesFlags modes;
  auto* modes_cmd = app.add_subcommand("modes", "solve basis modes, write constants and profiles");
  modes.common.add_to(modes_cmd);
  modes_cmd->add_option("--n", modes.n, "number of modes")->capture_default_str();
  modes_cmd->add_option("--samples", modes.samples, "radii per mode in the CSV")->capture_default_str();
  modes_cmd->add_option("--out-json", modes.out_json, "mode constants JSON")->required();
  modes_cmd->add_option("--out-csv", modes.out_csv, "sampled profiles CSV");

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand("verify", "check orthonormality, energy and residuals");
  verify.common.add_to(verify_cmd);
  verify_cmd->add_option("--n", verify.n, "number of modes")->capture_default_str();
  verify_cmd->add_option("--tol", verify.tol, "pass threshold")->capture_default_str();
  verify_cmd->add_option("--radii", verify.radii, "interior radii for residual checks")
      ->capture_default_str();

  FitFlags fitf;
  auto* fit_cmd = app.add_subcommand("fit", "expand a candidate field in the basis");
  fitf.common.add_to(fit_cmd);
  fit_cmd->add_option("--field", fitf.field, "target field")
      ->check(CLI::IsMember({"thermoelastic", "shrinkfit", "csv"}))
      ->capture_default_str();
  fit_cmd->add_option("--n-max", fitf.n_max, "number of modes")->capture_default_str();
  fit_cmd->add_option("--kappa", fitf.kappa, "bulk modulus (2.8 thermoelastic, 3 shrink fit)");
  fit_cmd->add_option("--mu", fitf.mu, "shear modulus")->default_str("1");
  fit_cmd->add_option("--alpha", fitf.alpha, "thermal expansion coefficient")->capture_default_str();
  fit_cmd->add_option("--c", fitf.c, "temperature slope constant")->capture_default_str();
  fit_cmd->add_option("--rm", fitf.r_m, "shrink-fit interface radius")->capture_default_str();
  fit_cmd->add_option("--delta", fitf.delta, "shrink-fit interference")->capture_default_str();
  fit_cmd->add_option("--input", fitf.input, "CSV with sampled profiles");
  fit_cmd->add_option("--breakpoints", fitf.breakpoints, "discontinuity radii r1,r2,...")
      ->delimiter(',');
  fit_cmd->add_option("--r-column", fitf.r_column, "CSV radius column")->capture_default_str();
  fit_cmd->add_option("--par-column", fitf.par_column, "CSV S_par column")->capture_default_str();
  fit_cmd->add_option("--perp-column", fitf.perp_column, "CSV S_perp column")->capture_default_str();
  fit_cmd->add_option("--out", fitf.out, "fit report JSON")->required();
  fit_cmd->add_option("--recon-prefix", fitf.recon_prefix,
                      "reconstruction CSV prefix (default: --out without extension)");
  fit_cmd->add_option("--samples", fitf.samples, "radii in reconstruction CSVs")->capture_default_str();
  fit_cmd->add_option("--window-lo", fitf.window_lo, "first n of the slope window")->capture_default_str();
  fit_cmd->add_option("--window-hi", fitf.window_hi, "last n of the slope window")->capture_default_str();

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate omega_N(p) or mu(r, p)");
  sweep.common.add_to(sweep_cmd, false);
  sweep_cmd->add_option("--what", sweep.what, "quantity")
      ->check(CLI::IsMember({"omega", "mu"}))
      ->required();
  sweep_cmd->add_option("--p-min", sweep.p_min)->capture_default_str();
  sweep_cmd->add_option("--p-max", sweep.p_max)->capture_default_str();
  sweep_cmd->add_option("--p-steps", sweep.p_steps)->capture_default_str();
  sweep_cmd->add_option("--n", sweep.n, "modes 1..N (omega) or mode N (mu)")->capture_default_str();
  sweep_cmd->add_option("--r-steps", sweep.r_steps, "radii per p (mu)")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*modes_cmd) return run_modes(modes);
    if (*verify_cmd) return run_verify(verify);
    if (*fit_cmd) return run_fit(fitf);
    return run_sweep(sweep);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
