#include "resbasis/io.hpp"

#include <cstdio>

namespace resbasis {

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json mode_record(const BasisMode& mode, const QuadratureSpec& spec) {
  nlohmann::ordered_json j;
  j["n"] = mode.constants.index_n;
  j["p"] = mode.params.p;
  j["k"] = mode.params.k;
  j["r_inner"] = mode.geometry.r_inner;
  j["r_outer"] = mode.geometry.r_outer;
  j["omega"] = mode.constants.omega;
  j["lambda"] = mode.constants.lambda();
  j["c"] = mode.constants.c;
  j["energy"] = energy(mode.field, mode.params.p, spec);
  j["norm_weight"] = std::string(to_string(spec.weight));
  return j;
}

nlohmann::ordered_json fit_report_json(const FitReport& report) {
  nlohmann::ordered_json j;
  j["p"] = report.params.p;
  j["k"] = report.params.k;
  j["norm_weight"] = std::string(to_string(report.norm_weight));
  j["n_max"] = report.n_max;
  j["coefficients"] = report.coefficients;
  j["e_l2"] = report.e_l2;
  j["e_h1"] = report.e_h1 ? nlohmann::ordered_json(*report.e_h1) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json slopes;
  slopes["e_l2"] = optional_number(report.slopes.e_l2);
  slopes["e_h1"] = optional_number(report.slopes.e_h1);
  slopes["b_odd"] = optional_number(report.slopes.b_odd);
  slopes["b_even"] = optional_number(report.slopes.b_even);
  j["slopes"] = slopes;
  j["window"] = {report.window_lo, report.window_hi};
  return j;
}

std::string csv_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_csv_row(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << csv_number(values[i]);
  }
  os << '\n';
}

}  // namespace resbasis
