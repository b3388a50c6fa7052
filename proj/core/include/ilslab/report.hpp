#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "ilslab/checks.hpp"
#include "ilslab/functionals.hpp"

namespace ilslab {

struct SuiteReport {
  std::string suite;
  std::vector<TheoremReport> checks;
  std::uint64_t seed = 0;
  double c = 2.0;
  double tol = 1e-9;
  std::string version;
  double seconds = 0.0;  // wall time; never written to report files

  bool pass() const;
};

enum class ReportFormat { json, csv };

/// Compact JSON with sorted keys and every float as "%.12e". NaN and
/// infinities become the strings "nan", "inf", "-inf".
std::string stable_dump(const nlohmann::json& value);

nlohmann::json to_json(const TheoremReport& r);
TheoremReport theorem_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SuiteReport& r);
SuiteReport suite_report_from_json(const nlohmann::json& j);

/// One row per check: name,pass,worst_margin,i,j,k,tolerance,instances.
std::string suite_csv(const SuiteReport& r);

/// n x K table; header row holds the radii, empty entries print "nan".
std::string slope_field_csv(const SlopeField& field);

/// Writes stable_dump(to_json(r)) or suite_csv(r). Throws IoError.
void write_report(const SuiteReport& r, ReportFormat format, const std::string& path);
void write_text(const std::string& text, const std::string& path);

}  // namespace ilslab
