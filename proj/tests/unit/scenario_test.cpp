#include "cgconf/scenario.hpp"
#include "cgconf/types.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

using namespace cgconf;

namespace {

ScenarioConfig config(const std::string& name, std::uint64_t seed = 1, int samples = 10) {
  ScenarioConfig c;
  c.scenario_name = name;
  c.seed = seed;
  c.samples = samples;
  return c;
}

}  // namespace

TEST(Scenario, RegistryIsComplete) {
  const auto names = scenario_names();
  EXPECT_EQ(names.size(), 11u);
  for (const auto& n : names) EXPECT_FALSE(scenario_description(n).empty()) << n;
}

TEST(Scenario, Deterministic) {
  for (const std::string name : {"bundle-conformality", "k-transfer", "veronese-optimality"}) {
    const ReportDocument a = run_scenario(config(name, 42)), b = run_scenario(config(name, 42));
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
      EXPECT_EQ(a.checks[i].measured, b.checks[i].measured) << a.checks[i].name;
      EXPECT_EQ(a.checks[i].residual, b.checks[i].residual) << a.checks[i].name;
    }
  }
}

TEST(Scenario, UsageErrors) {
  EXPECT_THROW(run_scenario(config("no-such-scenario")), UsageError);
  ScenarioConfig c = config("bundle-conformality");
  c.params["nonsense"] = "1";
  EXPECT_THROW(run_scenario(c), UsageError);
  c.params = {{"q", "abc"}};
  EXPECT_THROW(run_scenario(c), UsageError);
  EXPECT_THROW(run_scenario(config("k-properties", 1, 0)), UsageError);
  ScenarioConfig t = config("k-properties");
  t.tol = -1.0;
  EXPECT_THROW(run_scenario(t), UsageError);
}

TEST(Scenario, VeroneseOptimalitySeed7) {
  const ReportDocument r = run_scenario(config("veronese-optimality", 7, 50));
  EXPECT_TRUE(r.overall_pass);
  const CheckRecord* c = r.find("optimality coefficient C = 1");
  ASSERT_NE(c, nullptr);
  EXPECT_NEAR(c->measured, 1.0, 1e-6);
}

TEST(Scenario, BundleConformalitySecondPair) {
  ScenarioConfig c = config("bundle-conformality", 3, 20);
  c.params = {{"pair", "2"}, {"q", "1"}};
  const ReportDocument r = run_scenario(c);
  EXPECT_TRUE(r.overall_pass);
  EXPECT_EQ(r.find("pair 1: ratio independent of (A,B)"), nullptr);
  EXPECT_NE(r.find("pair 2: ratio independent of (A,B)"), nullptr);
}

TEST(Scenario, BundleConformalityOtherParameters) {
  for (const auto& [q, alpha] : std::vector<std::pair<std::string, std::string>>{{"1", "1"}, {"2", "0.5"}}) {
    ScenarioConfig c = config("bundle-conformality", 5, 20);
    c.params = {{"pair", "1"}, {"q", q}, {"alpha", alpha}};
    EXPECT_TRUE(run_scenario(c).overall_pass) << q << " " << alpha;
  }
}

TEST(Scenario, TolOverrideTightensResidualChecks) {
  ScenarioConfig c = config("gauss-relation", 1, 10);
  c.tol = 1e-14;
  const ReportDocument r = run_scenario(c);
  EXPECT_FALSE(r.overall_pass);
  for (const auto& chk : r.checks) EXPECT_EQ(chk.tolerance, 1e-14) << chk.name;
}

TEST(Scenario, TolOverrideLeavesThresholdsAlone) {
  ScenarioConfig c = config("horizontal-preservation", 1, 10);
  c.tol = 1e-3;
  const ReportDocument r = run_scenario(c);
  for (const auto& chk : r.checks)
    if (chk.relation == Relation::AtLeast) EXPECT_EQ(chk.tolerance, 0.1) << chk.name;
}

TEST(Report, JsonShape) {
  const ReportDocument r = run_scenario(config("k-properties"));
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(j.at("scenario_name"), "k-properties");
  EXPECT_EQ(j.at("overall_pass"), true);
  EXPECT_EQ(j.at("config").at("seed"), 1);
  ASSERT_EQ(j.at("checks").size(), r.checks.size());
  for (const auto& chk : j.at("checks")) {
    EXPECT_TRUE(chk.contains("name"));
    EXPECT_TRUE(chk.contains("measured"));
    EXPECT_TRUE(chk.contains("tolerance"));
    EXPECT_TRUE(chk.at("pass").is_boolean());
  }
  const auto arr = nlohmann::json::parse(to_json(std::vector<ReportDocument>{r, r}));
  EXPECT_EQ(arr.size(), 2u);
}
