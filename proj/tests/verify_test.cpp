#include <algorithm>
#include <set>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "tripartite/verify.hpp"

using namespace tripartite;
using json = nlohmann::json;

namespace {

const VerifyReport& default_report() {
  static const VerifyReport report = run_verification();
  return report;
}

}  // namespace

TEST(Verify, DefaultSuitePasses) {
  const VerifyReport& r = default_report();
  for (const auto& c : r.checks)
    EXPECT_TRUE(c.passed) << c.stage << '/' << c.name << " observed " << c.observed
                          << " tolerance " << c.tolerance;
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.failures(), 0u);
}

TEST(Verify, EveryStageContributes) {
  std::set<std::string> seen;
  for (const auto& c : default_report().checks) seen.insert(c.stage);
  for (const auto& s : verify_stages()) EXPECT_TRUE(seen.count(s)) << s;
}

TEST(Verify, ErratumCheckIsRecorded) {
  const auto& checks = default_report().checks;
  const auto it = std::find_if(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.name == "p010_direct_and_legendre_agree";
  });
  ASSERT_NE(it, checks.end());
  EXPECT_TRUE(it->passed);
  EXPECT_NE(it->detail.find("cos 2phi"), std::string::npos);
  EXPECT_NE(it->detail.find("inconsistent"), std::string::npos);
}

TEST(Verify, SkippingAStageRemovesItsChecks) {
  VerifyConfig config;
  config.skip = {"quadrature", "surface", "schmidt", "entanglement"};
  const VerifyReport r = run_verification(config);
  EXPECT_TRUE(r.passed());
  for (const auto& c : r.checks) {
    EXPECT_NE(c.stage, "quadrature");
    EXPECT_NE(c.stage, "surface");
  }
  EXPECT_EQ(r.skipped_stages.size(), 4u);
}

TEST(Verify, UnknownStageIsRejected) {
  VerifyConfig config;
  config.skip = {"nonsense"};
  EXPECT_THROW(run_verification(config), std::invalid_argument);
}

TEST(Verify, OverTightToleranceProducesNamedFailures) {
  VerifyConfig config;
  config.tolerance = 1e-16;
  config.skip = {"quadrature", "surface", "entanglement", "schmidt"};
  const VerifyReport r = run_verification(config);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.failures(), 0u);
  for (const auto& c : r.checks) {
    EXPECT_EQ(c.tolerance, 1e-16);
    if (!c.passed) {
      EXPECT_GT(c.observed, c.tolerance);
    }
  }
}

TEST(Verify, DocumentIsValidJson) {
  const json j = json::parse(verify_document(default_report()));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["failures"], 0);
  EXPECT_EQ(j["checks"].size(), default_report().checks.size());
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("observed"));
    EXPECT_TRUE(c.contains("tolerance"));
  }
}
