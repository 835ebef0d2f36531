#include "cgconf/scenario.hpp"

#include <nlohmann/json.hpp>

namespace cgconf {

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const ScenarioConfig& c) {
  ordered_json j;
  j["scenario_name"] = c.scenario_name;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["tol"] = c.tol ? ordered_json(*c.tol) : ordered_json(nullptr);
  j["params"] = ordered_json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  j["output_path"] = c.output_path ? ordered_json(*c.output_path) : ordered_json(nullptr);
  return j;
}

ordered_json report_json(const ReportDocument& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["scenario_name"] = r.scenario_name;
  j["config"] = config_json(r.config);
  j["checks"] = ordered_json::array();
  for (const CheckRecord& c : r.checks) {
    ordered_json k;
    k["name"] = c.name;
    k["expected"] = c.expected;
    k["measured"] = c.measured;
    k["residual"] = c.residual;
    k["tolerance"] = c.tolerance;
    k["relation"] = c.relation == Relation::AtMost ? "residual<=tolerance" : "measured>=tolerance";
    k["pass"] = c.pass;
    if (!c.detail.empty()) k["detail"] = c.detail;
    j["checks"].push_back(std::move(k));
  }
  j["overall_pass"] = r.overall_pass;
  j["timing_ms"] = r.timing_ms;
  return j;
}

}  // namespace

std::string to_json(const ReportDocument& report) { return report_json(report).dump(2) + "\n"; }

std::string to_json(const std::vector<ReportDocument>& reports) {
  ordered_json j = ordered_json::array();
  for (const ReportDocument& r : reports) j.push_back(report_json(r));
  return j.dump(2) + "\n";
}

}  // namespace cgconf
