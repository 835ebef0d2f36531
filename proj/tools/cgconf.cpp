// cgconf: run the verification scenarios from the command line.
//
//   cgconf run <scenario> [--seed N] [--samples N] [--tol X] [--param k=v ...] [--out FILE]
//   cgconf list
//   cgconf all [--seed N] [--samples N] [--tol X] [--out FILE]
//
// Exit status: 0 when every check passes, 1 when some check fails, 2 on a
// usage or configuration error.

#include "cgconf/scenario.hpp"
#include "cgconf/types.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void print_summary(const cgconf::ReportDocument& r) {
  std::printf("%s: %s (%.0f ms)\n", r.scenario_name.c_str(), r.overall_pass ? "PASS" : "FAIL", r.timing_ms);
  for (const cgconf::CheckRecord& c : r.checks) {
    const char* rel = c.relation == cgconf::Relation::AtMost ? "residual %.3e <= %.1e" : "measured %.6g >= %.6g";
    char buf[96];
    if (c.relation == cgconf::Relation::AtMost)
      std::snprintf(buf, sizeof buf, rel, c.residual, c.tolerance);
    else
      std::snprintf(buf, sizeof buf, rel, c.measured, c.tolerance);
    std::printf("  [%s] %s  (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), buf);
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cgconf::UsageError("cannot write '" + path + "'");
  out << text;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, std::string> out;
  for (const std::string& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw cgconf::UsageError("--param expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformality checks for bundle differentials"};
  app.require_subcommand(1);

  cgconf::ScenarioConfig cfg;
  double tol = 0.0;
  std::string out_path;
  std::vector<std::string> params;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--samples", cfg.samples, "samples per check");
    sub->add_option("--tol", tol, "tolerance for every residual check");
    sub->add_option("--out", out_path, "write the JSON report to FILE");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  run->add_option("scenario", cfg.scenario_name, "scenario name")->required();
  add_common(run);
  run->add_option("--param", params, "scenario parameter key=value");

  CLI::App* list = app.add_subcommand("list", "list the scenarios");
  CLI::App* all = app.add_subcommand("all", "run every scenario");
  add_common(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const std::string& name : cgconf::scenario_names())
        std::printf("%-26s %s\n", name.c_str(), cgconf::scenario_description(name).c_str());
      return 0;
    }

    if (run->count("--tol") || all->count("--tol")) cfg.tol = tol;
    if (!out_path.empty()) cfg.output_path = out_path;
    cfg.params = parse_params(params);

    std::vector<cgconf::ReportDocument> reports;
    if (run->parsed()) {
      reports.push_back(cgconf::run_scenario(cfg));
    } else if (all->parsed()) {
      for (const std::string& name : cgconf::scenario_names()) {
        cfg.scenario_name = name;
        reports.push_back(cgconf::run_scenario(cfg));
      }
    }

    bool pass = true;
    for (const auto& r : reports) {
      print_summary(r);
      pass = pass && r.overall_pass;
    }
    if (cfg.output_path)
      write_file(*cfg.output_path, reports.size() == 1 ? cgconf::to_json(reports.front()) : cgconf::to_json(reports));
    return pass ? 0 : kExitFail;
  } catch (const cgconf::UsageError& e) {
    std::fprintf(stderr, "cgconf: %s\n", e.what());
    return kExitUsage;
  } catch (const cgconf::Error& e) {
    std::fprintf(stderr, "cgconf: %s\n", e.what());
    return kExitFail;
  }
}
