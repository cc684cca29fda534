#pragma once

// JSON records and CSV formatting for command-line output.

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "resbasis/basis.hpp"
#include "resbasis/fitting.hpp"
#include "resbasis/quadrature.hpp"

namespace resbasis {

/// {"n","p","k","r_inner","r_outer","omega","lambda","c","energy","norm_weight"}
/// in that order. `energy` is evaluated with `spec`.
nlohmann::ordered_json mode_record(const BasisMode& mode, const QuadratureSpec& spec);

nlohmann::ordered_json fit_report_json(const FitReport& report);

/// 12 significant digits.
std::string csv_number(double value);

/// Comma-joined csv_number values followed by a newline.
void write_csv_row(std::ostream& os, std::span<const double> values);

}  // namespace resbasis
