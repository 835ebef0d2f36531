#pragma once

// Named verification scenarios and their reports.
//
// Every scenario draws its random inputs from per-sample streams derived from
// the configured seed, so a configuration fully determines the measured
// values. A check either bounds a residual (residual ≤ tolerance) or requires
// a measured quantity to reach a threshold (measured ≥ expected).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cgconf {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct ScenarioConfig {
  std::string scenario_name;
  std::uint64_t seed = 0;
  int samples = 50;
  /// Overrides the tolerance of every residual check when set.
  std::optional<double> tol;
  std::map<std::string, std::string> params;
  std::optional<std::string> output_path;

  /// Throws UsageError for samples < 1 or tol ≤ 0.
  void validate() const;
};

enum class Relation { AtMost, AtLeast };

struct CheckRecord {
  std::string name;
  double expected = 0.0;
  double measured = 0.0;
  double residual = 0.0;
  /// Bound on the residual (AtMost) or threshold for the measured value (AtLeast).
  double tolerance = 0.0;
  Relation relation = Relation::AtMost;
  bool pass = false;
  std::string detail;
};

struct ReportDocument {
  std::string schema_version = kReportSchemaVersion;
  std::string scenario_name;
  ScenarioConfig config;
  std::vector<CheckRecord> checks;
  bool overall_pass = false;
  double timing_ms = 0.0;

  const CheckRecord* find(const std::string& check_name) const;
};

/// Names of the registered scenarios, in registry order.
std::vector<std::string> scenario_names();

/// One-line description of a registered scenario.
std::string scenario_description(const std::string& name);

/// Runs one scenario. Throws UsageError for an unknown scenario name, an
/// unknown parameter or a malformed parameter value.
ReportDocument run_scenario(const ScenarioConfig& cfg);

/// The report as a JSON document (full-precision numbers).
std::string to_json(const ReportDocument& report);
/// Several reports as a JSON array.
std::string to_json(const std::vector<ReportDocument>& reports);

}  // namespace cgconf
