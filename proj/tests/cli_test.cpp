#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
};

/// Runs the CLI with `args`; stderr is merged into the captured output when
/// `merge_stderr` is set, otherwise discarded.
Result run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(TRIPARTITE_CLI_PATH) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tripartite_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, CoeffsIdentity) {
  const Result r = run("coeffs --n 0,0,1 --angles 0,0,0");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  for (const auto& e : j["entries"]) {
    const double expect = (e["k"] == 0 && e["l"] == 0) ? 1.0 : 0.0;
    EXPECT_EQ(e["value"].get<double>(), expect);
  }
}

TEST(Cli, CoeffsBothRoutesReportDiscrepancy) {
  const Result r = run("coeffs --n 0,0,1 --angles 0.5236,0.5236,0.5236 --route both");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_LT(j["discrepancy"].get<double>(), 1e-10);
  EXPECT_EQ(j["route"], "both");
}

TEST(Cli, CoeffsNegativeAngles) {
  const Result r = run("coeffs --n 1,0,1 --angles=-0.3,0.2,-1.1 --format csv");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("k,l,m,value\n", 0), 0u);
}

TEST(Cli, DegreeBound) {
  EXPECT_EQ(run("coeffs --n 5,5,5 --angles 0.1,0.2,0.3").status, 0);
  const Result r = run("coeffs --n 20,20,20 --angles 0.1,0.2,0.3", true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("40"), std::string::npos);
}

TEST(Cli, PurityExamples) {
  const Result half = run("purity --n 0,0,1 --angles 0.7853981633974483,0,0 --bipartition A --format doc");
  ASSERT_EQ(half.status, 0);
  const json j = json::parse(half.out);
  EXPECT_NEAR(j["purity"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["closed_form_purity"].get<double>(), 0.5, 1e-12);

  const Result approx = run("purity --n 0,0,1 --angles 0.7854,0,0 --bipartition A");
  ASSERT_EQ(approx.status, 0);
  EXPECT_NE(approx.out.find("purity (direct) = 0.5"), std::string::npos);
  EXPECT_NE(approx.out.find("difference"), std::string::npos);

  const Result ground = run("purity --n 0,0,0 --angles 0.3,0.2,0.1 --format doc");
  ASSERT_EQ(ground.status, 0);
  EXPECT_EQ(json::parse(ground.out)["purity"].get<double>(), 1.0);
}

TEST(Cli, ClosedMethodOnMultiAxisIsUsageError) {
  const Result r = run("purity --n 1,1,0 --angles 0.1,0.2,0.3 --method closed", true);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("single-axis"), std::string::npos);
}

TEST(Cli, SurfaceWritesCsvAndReportsExtremes) {
  const auto path = temp_file("surface.csv");
  const Result r = run("--out " + path.string() + " surface --bipartition A --n 0,0,1 --vphi 0.2 --grid 21");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("min purity 0.5"), std::string::npos);
  EXPECT_NE(r.out.find("max purity 1"), std::string::npos);
  const std::string csv = slurp(path);
  EXPECT_EQ(csv.rfind("theta,phi,purity\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 21 * 21);

  // identical invocations give byte-identical files
  const auto again = temp_file("surface2.csv");
  ASSERT_EQ(run("--out " + again.string() + " surface --vphi 0.2 --grid 21").status, 0);
  EXPECT_EQ(slurp(again), csv);
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

TEST(Cli, SurfaceBadPathIsReported) {
  const Result r = run("--out /nonexistent_dir/x.csv surface --grid 3", true);
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("/nonexistent_dir/x.csv"), std::string::npos);
}

TEST(Cli, SurfaceRejectsTinyGrid) {
  EXPECT_EQ(run("surface --grid 1").status, 2);
}

TEST(Cli, ReduceExamples) {
  const Result r = run("reduce --n1 1 --n2 0 --phi 0.5235987755982988 --format doc");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["lambda"][0].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(j["lambda"][1].get<double>(), 0.75, 1e-12);
  EXPECT_LT(j["tripartite_deviation"].get<double>(), 1e-10);

  const json trivial = json::parse(run("reduce --n1 0 --n2 0 --phi 1.3 --format doc").out);
  EXPECT_EQ(trivial["lambda"].size(), 1u);
  EXPECT_NEAR(trivial["lambda"][0].get<double>(), 1.0, 1e-15);

  const json norm = json::parse(run("reduce --n1 2 --n2 1 --phi 0.4 --format doc").out);
  EXPECT_NEAR(norm["lambda_sum"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, VerifySkipAndTightTolerance) {
  const auto doc = temp_file("verify.json");
  const Result ok = run("--out " + doc.string() +
                        " verify --skip quadrature,surface,entanglement,schmidt");
  EXPECT_EQ(ok.status, 0);
  EXPECT_NE(ok.out.find("SKIP quadrature"), std::string::npos);
  const json j = json::parse(slurp(doc));
  EXPECT_TRUE(j["passed"].get<bool>());
  std::filesystem::remove(doc);

  const Result tight = run("verify --tol 1e-16 --skip quadrature,surface,entanglement,schmidt");
  EXPECT_EQ(tight.status, 1);
  EXPECT_NE(tight.out.find("FAIL"), std::string::npos);
  EXPECT_NE(tight.out.find("tolerance 1e-16"), std::string::npos);

  EXPECT_EQ(run("verify --tol -1").status, 2);
  EXPECT_EQ(run("verify --skip bogus").status, 2);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const auto cfg = temp_file("run.ini");
  {
    std::ofstream f(cfg);
    f << "[reduce]\nn1=1\nn2=0\nphi=0.5235987755982988\n";
  }
  const Result r = run("--config " + cfg.string() + " --format doc reduce");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NEAR(json::parse(r.out)["lambda"][0].get<double>(), 0.25, 1e-12);
  std::filesystem::remove(cfg);
}

TEST(Cli, UnknownSubcommandFails) {
  EXPECT_NE(run("frobnicate").status, 0);
  EXPECT_NE(run("").status, 0);
}

TEST(Cli, NegativeQuantumNumbersAreUsageErrors) {
  EXPECT_EQ(run("reduce --n1=-1 --n2 0 --phi 0.2").status, 2);
  EXPECT_EQ(run("purity --n=-1,0,0 --angles 0,0,0").status, 2);
  EXPECT_EQ(run("coeffs --n 1,0 --angles 0,0,0").status, 2);
}
