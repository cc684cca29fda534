#include "resbasis/candidates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <sstream>

#include "resbasis/errors.hpp"

namespace resbasis {

// ---------------------------------------------------------------------------
// Thermoelastic

void ThermoelasticSpec::validate() const {
  if (!(kappa > 0.0) || !(mu > 0.0) || c == 0.0 || !std::isfinite(c) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidArgument,
                "thermoelastic spec needs kappa > 0, mu > 0 and c != 0");
  }
}

namespace {

struct ThermoCoefficients {
  double k = 0.0;                  // prefactor of Sigma_par
  std::array<double, 5> num{};     // Sigma_par = k * sum num[j] r^j / r^3
};

ThermoCoefficients thermo_coefficients(const ThermoelasticSpec& s) {
  const double ri = s.geometry.r_inner, ro = s.geometry.r_outer;
  const double sum2 = ri * ri + ri * ro + ro * ro;
  ThermoCoefficients out;
  out.k = 9.0 * s.c * s.alpha * s.kappa * s.mu / ((3.0 * s.kappa + 4.0 * s.mu) * ro * sum2);
  // (r - ri)(ro - r) = -ri ro + (ri + ro) r - r^2
  const std::array<double, 3> a = {-ri * ro, ri + ro, -1.0};
  const std::array<double, 3> b = {ri * ri * ro * ro, ri * ro * (ri + ro), sum2};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out.num[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

std::array<double, 3> thermoelastic_par_derivatives(const ThermoelasticSpec& spec, double r) {
  const ThermoCoefficients tc = thermo_coefficients(spec);
  // sum_j num_j r^(j-3) differentiated term by term.
  std::array<double, 3> out{};
  for (std::size_t j = 0; j < 5; ++j) {
    const double e = static_cast<double>(j) - 3.0;
    const double t = tc.num[j] * std::pow(r, e);
    out[0] += t;
    out[1] += e * t / r;
    out[2] += e * (e - 1.0) * t / (r * r);
  }
  for (double& v : out) v *= tc.k;
  return out;
}

double thermoelastic_governing_residual(const ThermoelasticSpec& spec, double r) {
  const auto d = thermoelastic_par_derivatives(spec, r);
  const double dtemp = spec.c / spec.geometry.r_outer;
  return r * d[2] + 4.0 * d[1] +
         36.0 * spec.alpha * spec.kappa * spec.mu * dtemp / (3.0 * spec.kappa + 4.0 * spec.mu);
}

RadialField thermoelastic_field(const ThermoelasticSpec& spec) {
  spec.validate();
  const ThermoCoefficients tc = thermo_coefficients(spec);
  const double ri = spec.geometry.r_inner, ro = spec.geometry.r_outer;
  const double ri3ro3 = std::pow(ri * ro, 3);
  const double sum2 = ri * ri + ri * ro + ro * ro;
  const double sum3 = ri * ri * ri + ri * ri * ro + ri * ro * ro + ro * ro * ro;
  const double k = tc.k;

  RadialProfile par([spec](double r) { return thermoelastic_par_derivatives(spec, r)[0]; },
                    [spec](double r) { return thermoelastic_par_derivatives(spec, r)[1]; });
  RadialProfile perp(
      [=](double r) { return 0.5 * k * (ri3ro3 / (r * r * r) - 3.0 * sum2 * r + 2.0 * sum3); },
      [=](double r) { return 0.5 * k * (-3.0 * ri3ro3 / (r * r * r * r) - 3.0 * sum2); });
  return RadialField(std::move(par), std::move(perp), spec.geometry);
}

// ---------------------------------------------------------------------------
// Shrink fit

void ShrinkFitSpec::validate() const {
  if (!(kappa > 0.0) || !(mu > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "shrink-fit spec needs kappa > 0 and mu > 0");
  }
  if (!(r_m > geometry.r_inner && r_m < geometry.r_outer)) {
    throw Error(ErrorKind::kInvalidArgument, "shrink-fit interface needs r_inner < r_m < r_outer");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::kInvalidArgument, "shrink-fit interference needs delta > 0");
  }
}

double shrinkfit_pressure(const ShrinkFitSpec& spec) {
  spec.validate();
  const double ri3 = std::pow(spec.geometry.r_inner, 3);
  const double ro3 = std::pow(spec.geometry.r_outer, 3);
  const double rm3 = std::pow(spec.r_m, 3);
  return 12.0 * spec.delta * spec.kappa * spec.mu * (ro3 - rm3) * (rm3 - ri3) /
         ((3.0 * spec.kappa + 4.0 * spec.mu) * std::pow(spec.r_m, 4) * (ro3 - ri3));
}

StressPair shrinkfit_inner(const ShrinkFitSpec& spec, double r) {
  const double p0 = shrinkfit_pressure(spec);
  const double ri3 = std::pow(spec.geometry.r_inner, 3);
  const double rm3 = std::pow(spec.r_m, 3);
  const double ki = -p0 / (1.0 / ri3 - 1.0 / rm3);
  const double u = 1.0 / (r * r * r);
  return {ki * (1.0 / ri3 - u), ki * (1.0 / ri3 + 0.5 * u)};
}

StressPair shrinkfit_outer(const ShrinkFitSpec& spec, double r) {
  const double p0 = shrinkfit_pressure(spec);
  const double ro3 = std::pow(spec.geometry.r_outer, 3);
  const double rm3 = std::pow(spec.r_m, 3);
  const double ko = -p0 / (1.0 / rm3 - 1.0 / ro3);
  const double u = 1.0 / (r * r * r);
  return {ko * (u - 1.0 / ro3), -ko * (1.0 / ro3 + 0.5 * u)};
}

RadialField shrinkfit_field(const ShrinkFitSpec& spec) {
  spec.validate();
  const double p0 = shrinkfit_pressure(spec);
  const double ri3 = std::pow(spec.geometry.r_inner, 3);
  const double ro3 = std::pow(spec.geometry.r_outer, 3);
  const double rm3 = std::pow(spec.r_m, 3);
  const double ki = -p0 / (1.0 / ri3 - 1.0 / rm3);
  const double ko = -p0 / (1.0 / rm3 - 1.0 / ro3);
  const double rm = spec.r_m;

  // d/dr r^-3 = -3 r^-4
  RadialProfile par(
      [=](double r) {
        const double u = 1.0 / (r * r * r);
        return r < rm ? ki * (1.0 / ri3 - u) : ko * (u - 1.0 / ro3);
      },
      [=](double r) {
        const double du = -3.0 / (r * r * r * r);
        return r < rm ? -ki * du : ko * du;
      },
      {rm});
  RadialProfile perp(
      [=](double r) {
        const double u = 1.0 / (r * r * r);
        return r < rm ? ki * (1.0 / ri3 + 0.5 * u) : -ko * (1.0 / ro3 + 0.5 * u);
      },
      [=](double r) {
        const double du = -3.0 / (r * r * r * r);
        return r < rm ? 0.5 * ki * du : -0.5 * ko * du;
      },
      {rm});
  return RadialField(std::move(par), std::move(perp), spec.geometry);
}

// ---------------------------------------------------------------------------
// Sampled fields

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::kSchema, "line " + std::to_string(line_no) + ": '" + std::string(text) +
                                        "' is not a finite number");
  }
  return v;
}

std::size_t column_index(const std::vector<std::string_view>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorKind::kSchema, "CSV header lacks a '" + name + "' column");
  }
  return static_cast<std::size_t>(it - header.begin());
}

struct Segment {
  std::vector<double> r, par, perp;
};

// Piecewise spline over segments split at the breakpoints.
class SegmentedSpline {
 public:
  SegmentedSpline(std::vector<double> breakpoints, std::vector<CubicSpline> pieces)
      : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {}

  const CubicSpline& at(double r) const {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), r);
    return pieces_[static_cast<std::size_t>(it - breakpoints_.begin())];
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<CubicSpline> pieces_;
};

}  // namespace

SampledField load_sampled_field(std::string_view csv, const ShellGeometry& geometry,
                                std::vector<double> breakpoints, const CsvColumns& columns) {
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (!(b > geometry.r_inner && b < geometry.r_outer)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "breakpoint " + std::to_string(b) + " is not strictly inside the shell");
    }
  }

  std::vector<std::string_view> header;
  std::size_t i_r = 0, i_par = 0, i_perp = 0;
  std::vector<Segment> segments(breakpoints.size() + 1);
  std::size_t seg = 0;
  double last_r = -std::numeric_limits<double>::infinity();
  double first_r = std::numeric_limits<double>::quiet_NaN();
  std::size_t rows = 0;
  double scale = 0.0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto nl = csv.find('\n', pos);
    const std::string_view line =
        trim(csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? csv.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;

    if (header.empty()) {
      header = split_commas(line);
      i_r = column_index(header, columns.r);
      i_par = column_index(header, columns.par);
      i_perp = column_index(header, columns.perp);
      continue;
    }
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::kSchema, "line " + std::to_string(line_no) + " has " +
                                          std::to_string(cells.size()) + " fields, header has " +
                                          std::to_string(header.size()));
    }
    const double r = parse_number(cells[i_r], line_no);
    const double sp = parse_number(cells[i_par], line_no);
    const double st = parse_number(cells[i_perp], line_no);

    if (r == last_r && seg < breakpoints.size() && r == breakpoints[seg]) {
      ++seg;  // second sample at a breakpoint opens the next segment
    } else if (!(r > last_r)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "radii must be strictly increasing (line " + std::to_string(line_no) + ")");
    } else {
      while (seg < breakpoints.size() && r > breakpoints[seg]) ++seg;
    }
    if (rows == 0) first_r = r;
    last_r = r;
    ++rows;
    scale = std::max({scale, std::abs(sp), std::abs(st)});
    segments[seg].r.push_back(r);
    segments[seg].par.push_back(sp);
    segments[seg].perp.push_back(st);
  }
  if (header.empty()) throw Error(ErrorKind::kSchema, "CSV input is empty");

  const double span_tol = 1e-9 * geometry.width();
  if (rows == 0 || first_r > geometry.r_inner + span_tol || last_r < geometry.r_outer - span_tol ||
      first_r < geometry.r_inner - span_tol || last_r > geometry.r_outer + span_tol) {
    std::ostringstream os;
    os << "samples must span the shell [" << geometry.r_inner << ", " << geometry.r_outer << "]";
    if (rows > 0) os << " (got [" << first_r << ", " << last_r << "])";
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }

  std::vector<CubicSpline> par_pieces, perp_pieces;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (segments[s].r.size() < 4) {
      throw Error(ErrorKind::kInvalidArgument,
                  "segment " + std::to_string(s + 1) + " has fewer than 4 samples");
    }
    par_pieces.emplace_back(segments[s].r, segments[s].par);
    perp_pieces.emplace_back(segments[s].r, segments[s].perp);
  }
  auto par_spline = std::make_shared<SegmentedSpline>(breakpoints, std::move(par_pieces));
  auto perp_spline = std::make_shared<SegmentedSpline>(breakpoints, std::move(perp_pieces));

  SampledField out{
      RadialField(
          RadialProfile([par_spline](double r) { return par_spline->at(r).value(r); },
                        [par_spline](double r) { return par_spline->at(r).derivative(r); },
                        breakpoints),
          RadialProfile([perp_spline](double r) { return perp_spline->at(r).value(r); },
                        [perp_spline](double r) { return perp_spline->at(r).derivative(r); },
                        breakpoints),
          geometry),
      {}};

  if (scale > 0.0) {
    const auto& f = out.field;
    const double bc_tol = 1e-6 * scale;
    if (std::abs(f.s_par()(geometry.r_inner)) > bc_tol) {
      out.warnings.push_back("S_par(r_inner) = " + std::to_string(f.s_par()(geometry.r_inner)) +
                             " is not zero");
    }
    if (std::abs(f.s_par()(geometry.r_outer)) > bc_tol) {
      out.warnings.push_back("S_par(r_outer) = " + std::to_string(f.s_par()(geometry.r_outer)) +
                             " is not zero");
    }
    double worst = 0.0, worst_r = 0.0;
    for (const auto& s : segments) {
      for (double r : s.r) {
        if (on_breakpoint(f, r)) continue;
        const double e = std::abs(equilibrium_residual(f, r));
        if (e > worst) {
          worst = e;
          worst_r = r;
        }
      }
    }
    if (worst > 1e-3 * scale) {
      std::ostringstream os;
      os << "equilibrium residual " << worst << " at r = " << worst_r
         << " exceeds 1e-3 of the field scale";
      out.warnings.push_back(os.str());
    }
  }
  return out;
}

}  // namespace resbasis
