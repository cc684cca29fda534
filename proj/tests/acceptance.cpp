// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "resbasis/basis.hpp"
#include "resbasis/candidates.hpp"
#include "resbasis/errors.hpp"
#include "resbasis/fitting.hpp"
#include "resbasis/quadrature.hpp"

using namespace resbasis;

namespace {

const ShellGeometry kShell;
const SolverOptions kOpts;
const QuadratureSpec kSpec;
constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the reasons a criterion fails.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool ok() const { return failures_.empty(); }
  std::string detail() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}
std::string fmt(const char* f, int n, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, n, a);
  return buf;
}

std::vector<double> interior_radii(int count) {
  std::vector<double> r;
  for (int i = 1; i <= count; ++i) r.push_back(kShell.r_inner + kShell.width() * i / (count + 1));
  return r;
}

bool report(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  std::printf("%s criterion %2d  %-34s %s\n", c.ok() ? "PASS" : "FAIL", id, title.c_str(), c.detail().c_str());
  std::fflush(stdout);
  return c.ok();
}

struct Choice {
  double beta, gamma;
};
const std::vector<Choice> kFitChoices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};

std::vector<BasisMode> modes_for(const Choice& c, int count) {
  return solve_modes(count, FunctionalParams::from_beta_gamma(c.beta, c.gamma), kShell, kOpts);
}

}  // namespace

int main() {
  int failed = 0;
  auto tally = [&](bool ok) { failed += ok ? 0 : 1; };

  tally(report(1, "frequencies near 2 N pi", [](Check& c) {
    const auto t0 = Clock::now();
    const auto modes = solve_p0_sequence(10, kShell, kOpts);
    const double elapsed = seconds_since(t0);
    const auto roots = oracle::shooting_frequencies(10, 0.0);
    double worst_rel = 0.0, worst_oracle = 0.0;
    for (int n = 1; n <= 10; ++n) {
      const double w = modes[n - 1].omega;
      worst_rel = std::max(worst_rel, std::abs(w / (2.0 * n * kPi) - 1.0));
      worst_oracle = std::max(worst_oracle, std::abs(w - roots[n - 1]));
    }
    c.expect(worst_rel < 0.05, fmt("max |w/(2N pi) - 1| = %.3g", worst_rel));
    c.expect(worst_oracle < 1e-8, fmt("max |w - shooting| = %.3g", worst_oracle));
    c.expect(elapsed < 5.0, fmt("solve took %.2f s", elapsed));
    c.note(fmt("max |w/(2N pi)-1| = %.3g, |w - shooting| = %.2g", worst_rel, worst_oracle));
  }));

  tally(report(2, "c2 -> 0 and c3 -> 1", [](Check& c) {
    const auto modes = solve_p0_sequence(10, kShell, kOpts);
    const auto& m = modes[9];
    c.expect(m.c[3] >= 0.0, "c3 sign convention violated");
    c.expect(std::abs(m.c[2]) < 0.05, fmt("|c2(10)| = %.4g", std::abs(m.c[2])));
    c.expect(std::abs(m.c[3] - 1.0) < 0.05, fmt("|c3(10) - 1| = %.4g", std::abs(m.c[3] - 1.0)));
    c.note(fmt("c2(10) = %.5f, c3(10) = %.5f", m.c[2], m.c[3]));
  }));

  tally(report(3, "orthonormality", [](Check& c) {
    double worst_gram = 0.0, worst_energy = 0.0;
    for (double p : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
      const auto modes = solve_modes(10, {p, 0.0}, kShell, kOpts);
      const double max_lambda = modes.back().constants.lambda();
      for (std::size_t i = 0; i < modes.size(); ++i) {
        for (std::size_t j = i; j < modes.size(); ++j) {
          const double g = l2_inner(modes[i].field, modes[j].field, kSpec);
          worst_gram = std::max(worst_gram, std::abs(g - (i == j ? 1.0 : 0.0)));
          if (i != j) {
            const double e = energy_inner(modes[i].field, modes[j].field, p, kSpec);
            worst_energy = std::max(worst_energy, std::abs(e) / max_lambda);
          }
        }
      }
    }
    c.expect(worst_gram < 1e-8, fmt("max |G - I| = %.3g", worst_gram));
    c.expect(worst_energy < 1e-6, fmt("max energy off-diagonal / max lambda = %.3g", worst_energy));
    c.note(fmt("max |G - I| = %.2g, energy off-diag / max lambda = %.2g", worst_gram, worst_energy));
  }));

  tally(report(4, "lambda = 2E", [](Check& c) {
    double worst = 0.0;
    for (double p : {0.0, 2.5, 5.0}) {
      for (const auto& m : solve_modes(10, {p, 0.0}, kShell, kOpts)) {
        const double lam = m.constants.lambda();
        worst = std::max(worst, std::abs(2.0 * energy(m.field, p, kSpec) - lam) / lam);
      }
    }
    c.expect(worst < 1e-6, fmt("max |2E - lambda| / lambda = %.3g", worst));
    c.note(fmt("max |2E - lambda| / lambda = %.2g", worst));
  }));

  tally(report(5, "Euler-Lagrange residual", [](Check& c) {
    double worst = 0.0;
    for (const FunctionalParams params : {FunctionalParams{0, 0}, FunctionalParams{3, 0}, FunctionalParams{5, 2}}) {
      for (const auto& m : solve_modes(4, params, kShell, kOpts)) {
        for (double r : interior_radii(50)) {
          const StressPair e = el_residual(m, r);
          worst = std::max(worst, std::max(std::abs(e.par), std::abs(e.perp)) / m.constants.lambda());
        }
      }
    }
    c.expect(worst < 1e-6, fmt("max residual / lambda = %.3g", worst));
    c.note(fmt("max residual / lambda = %.2g", worst));
  }));

  tally(report(6, "multiplier at the Helmholtz point", [](Check& c) {
    double worst_helm = 0.0;
    const FunctionalParams helm = FunctionalParams::from_beta_gamma(1.0, -1.0);
    for (const auto& m : solve_modes(4, helm, kShell, kOpts)) {
      const double scale = std::abs(m.constants.c[0]) * m.constants.omega;
      for (int i = 0; i <= 400; ++i) {
        const double r = kShell.r_inner + kShell.width() * i / 400.0;
        worst_helm = std::max(worst_helm, std::abs(eval_mu(m.constants, helm, kShell, r)) / scale);
      }
    }
    double worst_beta1 = 0.0;
    for (double p : {0.0, 1.0, 2.0, 3.0}) {
      const FunctionalParams params{p, 3.0 - p};  // beta = 1
      for (const auto& m : solve_modes(4, params, kShell, kOpts)) {
        const auto& k = m.constants;
        const double ro3 = std::pow(kShell.r_outer, 3);
        for (double r : interior_radii(50)) {
          const double alg = -k.c[0] / (2.0 * k.omega * r * r) * (k.c[1] - 2.0 * k.c[4] * r * r * r / ro3);
          worst_beta1 = std::max(worst_beta1, std::abs(eval_mu(k, params, kShell, r) - alg));
        }
      }
    }
    c.expect(worst_helm < 1e-10, fmt("sup |mu| / (|c0| w) = %.3g", worst_helm));
    c.expect(worst_beta1 < 1e-12, fmt("beta = 1 deviation %.3g", worst_beta1));
    c.note(fmt("sup |mu|/(|c0| w) = %.2g, beta=1 deviation = %.2g", worst_helm, worst_beta1));
  }));

  tally(report(7, "insensitivity to p", [](Check& c) {
    const int steps = 51;
    const auto start = solve_p0_sequence(4, kShell, kOpts);
    std::string spans;
    for (const auto& m0 : start) {
      const int n = m0.index_n;
      ModeConstants m = m0;
      double lo = m0.omega / n, hi = lo, at = 0.0;
      for (int i = 1; i < steps; ++i) {
        const double p = 5.0 * i / (steps - 1);
        m = continue_in_p(m, p, kShell, kOpts, at);
        at = p;
        lo = std::min(lo, m.omega / n);
        hi = std::max(hi, m.omega / n);
      }
      const double variation = (hi - lo) / (m0.omega / n);
      c.expect(variation < 0.10, fmt("N=%d: w/N varies by %.1f%%", n, 100.0 * variation));
      spans += fmt("N=%d %.1f%% ", n, 100.0 * variation);
    }
    const auto cont = continue_in_p(start[0], 3.0, kShell, kOpts);
    const auto cold = refine_mode(start[0], 3.0, kShell, kOpts);
    double worst = std::abs(cont.omega - cold.omega);
    for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::abs(cont.c[i] - cold.c[i]));
    c.expect(worst < 1e-8, fmt("continuation vs cold Newton at p=3: %.3g", worst));
    c.note("variation " + spans + fmt("| continuation vs cold Newton %.2g", worst));
  }));

  tally(report(8, "thermoelastic fit", [](Check& c) {
    const auto t0 = Clock::now();
    const auto target = thermoelastic_field({});
    std::string summary;
    for (const auto& ch : kFitChoices) {
      const auto modes = modes_for(ch, 100);
      const auto rep = fit(target, modes, kSpec, 20, 100);
      const std::string tag = fmt("(b,g)=(%g,%g)", ch.beta, ch.gamma);
      if (!rep.slopes.e_l2 || !rep.slopes.e_h1 || !rep.slopes.b_odd) {
        c.expect(false, tag + " slopes missing");
        continue;
      }
      const double sl = *rep.slopes.e_l2, sh = *rep.slopes.e_h1, so = *rep.slopes.b_odd;
      c.expect(std::abs(sl + 1.5) <= 0.3, tag + fmt(" e_l2 slope %.3f", sl));
      c.expect(std::abs(sh + 0.5) <= 0.2, tag + fmt(" e_h1 slope %.3f", sh));
      c.expect(std::abs(so + 2.0) <= 0.3, tag + fmt(" odd |b| slope %.3f", so));
      double odd = 0.0, even = 0.0;
      for (int n = 1; n <= 40; ++n) (n % 2 ? odd : even) += std::abs(rep.coefficients[n - 1]) / 20.0;
      c.expect(even < odd, tag + fmt(" mean even |b| %.3g >= mean odd |b| %.3g", even, odd));
      summary += tag + fmt(" l2 %.2f h1 ", sl) + fmt("%.2f odd ", sh) + fmt("%.2f; ", so);
    }
    const double elapsed = seconds_since(t0);
    c.expect(elapsed < 30.0, fmt("took %.1f s", elapsed));
    c.note(summary + fmt("%.1f s", elapsed));
  }));

  tally(report(9, "shrink-fit fit", [](Check& c) {
    const auto target = shrinkfit_field({});
    std::string summary;
    for (const auto& ch : kFitChoices) {
      const auto modes = modes_for(ch, 100);
      const auto rep = fit(target, modes, kSpec, 20, 100);
      const std::string tag = fmt("(b,g)=(%g,%g)", ch.beta, ch.gamma);
      c.expect(rep.slopes.e_l2 && std::abs(*rep.slopes.e_l2 + 0.5) <= 0.2,
               tag + fmt(" e_l2 slope %.3f", rep.slopes.e_l2.value_or(NAN)));
      bool monotone = true;
      for (std::size_t n = 1; n < rep.e_l2.size(); ++n) monotone = monotone && rep.e_l2[n] <= rep.e_l2[n - 1];
      c.expect(monotone, tag + " e_l2 increases somewhere");
      c.expect(!rep.e_h1, tag + " H1 curve was produced");
      const double o50 = gibbs_overshoot(target, reconstruct(modes, rep.coefficients, 50), 0.75, 0.05);
      const double o100 = gibbs_overshoot(target, reconstruct(modes, rep.coefficients, 100), 0.75, 0.05);
      c.expect(o50 > 0.0 && o100 / o50 > 0.5, tag + fmt(" overshoot 50 -> 100: %.3g -> %.3g", o50, o100));
      summary += tag + fmt(" slope %.2f overshoot ratio %.2f; ", rep.slopes.e_l2.value_or(NAN), o100 / o50);
    }
    bool refused = false;
    try {
      h1_error_sq(target, kSpec);
    } catch (const Error& e) {
      refused = e.kind() == ErrorKind::kDiscontinuousField;
    }
    c.expect(refused, "H1 error not refused");

    ShrinkFitSpec close;
    close.r_m = 0.55;
    const auto modes = solve_modes(100, {0.0, 0.0}, kShell, kOpts);
    const auto rep = fit(shrinkfit_field(close), modes, kSpec);
    bool monotone = true;
    for (std::size_t n = 1; n < rep.e_l2.size(); ++n) monotone = monotone && rep.e_l2[n] <= rep.e_l2[n - 1];
    c.expect(monotone, "r_m = 0.55: e_l2 increases somewhere");
    c.note(summary);
  }));

  tally(report(10, "candidate fields", [](Check& c) {
    const ThermoelasticSpec ts;
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double r = 0.5 + 0.5 * i / 200.0;
      worst = std::max(worst, std::abs(thermoelastic_governing_residual(ts, r)));
    }
    c.expect(worst < 1e-9, fmt("thermoelastic residual %.3g", worst));

    const ShrinkFitSpec ss;
    const double p0 = shrinkfit_pressure(ss);
    c.expect(std::abs(p0 - 1.7167e-2) < 5e-7, fmt("p0 = %.7g", p0));
    const double ri3 = std::pow(ss.geometry.r_inner, 3), ro3 = std::pow(ss.geometry.r_outer, 3);
    const double rm = ss.r_m, rm3 = rm * rm * rm;
    const double ui = -p0 * rm3 * (3 * ri3 * ss.kappa + 4 * rm3 * ss.mu) / (12 * ss.kappa * ss.mu * rm * rm * (rm3 - ri3));
    const double uo = p0 * rm3 * (3 * ro3 * ss.kappa + 4 * rm3 * ss.mu) / (12 * ss.kappa * ss.mu * rm * rm * (ro3 - rm3));
    c.expect(std::abs(uo - ui - ss.delta) < 1e-12, fmt("u_o - u_i - delta = %.3g", uo - ui - ss.delta));
    const double jump = shrinkfit_outer(ss, rm).perp - shrinkfit_inner(ss, rm).perp;
    c.expect(std::abs(jump - 5.539e-2) < 5e-5, fmt("transverse jump %.6g", jump));
    c.note(fmt("p0 = %.8g, jump = %.6g", p0, jump) + fmt(", thermo residual %.2g", worst));
  }));

  tally(report(11, "self-fit", [](Check& c) {
    double worst = 0.0;
    for (double p : {0.0, 5.0}) {
      const auto modes = solve_modes(10, {p, 0.0}, kShell, kOpts);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const auto b = project(modes[m].field, modes, kSpec);
        for (std::size_t n = 0; n < b.size(); ++n) worst = std::max(worst, std::abs(b[n] - (n == m ? 1.0 : 0.0)));
      }
    }
    c.expect(worst < 1e-8, fmt("max |b - delta| = %.3g", worst));
    c.note(fmt("max |b - delta| = %.2g", worst));
  }));

  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
