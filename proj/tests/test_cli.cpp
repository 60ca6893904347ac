#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "spp/generators.hpp"

using namespace spp;
using namespace spp::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SPP_CONFIG_DIR;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("spp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& command, const std::string& config, const std::string& out = "a",
          Format format = Format::kCsv, std::optional<std::uint64_t> seed = {}) {
    Options options;
    options.config = kConfigs / config;
    options.out = dir_ / out;
    options.format = format;
    options.seed = seed;
    log_.str("");
    return run_command(command, options, log_);
  }
  Json summary(const std::string& out = "a") { return Json::parse(slurp(dir_ / out / "summary.json")); }
  std::string file(const std::string& name, const std::string& out = "a") { return slurp(dir_ / out / name); }

  fs::path dir_;
  std::ostringstream log_;
};

ExperimentConfig parse(const std::string& text) { return parse_config(Json::parse(text)); }

}  // namespace

TEST_F(Cli, GenerateHarmonicWritesCanonicalInstance) {
  ASSERT_EQ(run("generate", "generate_harmonic.json"), kOk);
  auto text = file("instance.json");
  auto inst = io::parse_instance(text);
  EXPECT_EQ(inst.pi.size(), 64u);
  EXPECT_EQ(inst.pi, valuation::gen_harmonic(64).pi);
  EXPECT_EQ(io::serialize_instance(inst), text);
  EXPECT_EQ(summary()["support_size"], 64);
  EXPECT_EQ(summary()["status"], "ok");
}

TEST_F(Cli, GenerateModularReportsDependence) {
  ASSERT_EQ(run("generate", "generate_modular.json"), kOk);
  auto inst = io::parse_instance(file("instance.json"));
  EXPECT_FALSE(valuation::validate(inst.pi).has_value());
  EXPECT_EQ(summary()["dependence"]["d"], 2);
}

TEST_F(Cli, GeneratorPreconditionSurfaces) {
  EXPECT_EQ(run("generate", "generate_modular_bad_eps.json"), kRuntimeError);
  auto s = summary();
  EXPECT_EQ(s["status"], "error");
  EXPECT_NE(s["error"].get<std::string>().find("eps"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "a" / "instance.json"));
}

TEST_F(Cli, EvaluateBlindUnlimitedMatchesLp) {
  ASSERT_EQ(run("evaluate", "evaluate_correlated_pair.json"), kOk);
  auto rows = summary()["report"]["rows"];
  EXPECT_EQ(rows[0]["policy"], "blind_unlimited");
  EXPECT_EQ(rows[0]["ratio_lp"], "1");
  EXPECT_TRUE(summary()["assertions"][0]["holds"]);
  EXPECT_NE(file("report.csv").find("correlated-pair-64,blind_unlimited,"), std::string::npos);
  EXPECT_TRUE(Json::parse(file("policies.json")).contains("best_fixed_price"));
}

TEST_F(Cli, EvaluateHarmonicFixedPrice) {
  ASSERT_EQ(run("evaluate", "evaluate_harmonic.json"), kOk);
  EXPECT_EQ(summary()["report"]["rows"][0]["exact_revenue"], "1/64");
}

TEST_F(Cli, FailedAssertionExitsNonzeroAndStillWritesReport) {
  EXPECT_EQ(run("evaluate", "evaluate_blind_k_threshold.json"), kFired);
  auto s = summary();
  EXPECT_EQ(s["status"], "fired");
  ASSERT_EQ(s["assertions"].size(), 2u);
  EXPECT_TRUE(s["assertions"][0]["holds"]);
  EXPECT_FALSE(s["assertions"][1]["holds"]);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "report.csv"));
}

TEST_F(Cli, CapacityFallbackIsReported) {
  ASSERT_EQ(run("evaluate", "evaluate_enhanced_capacity.json"), kOk);
  auto s = summary();
  ASSERT_EQ(s["notes"].size(), 1u);
  EXPECT_NE(s["notes"][0].get<std::string>().find("evaluation.mode"), std::string::npos);
  EXPECT_TRUE(s["report"]["rows"][0]["exact_revenue"].is_null());
  EXPECT_EQ(s["report"]["rows"][0]["mc"]["trials"], 2000);
}

TEST_F(Cli, MonteCarloIsDeterministicAndSeedable) {
  ASSERT_EQ(run("evaluate", "evaluate_mc.json", "a"), kOk);
  ASSERT_EQ(run("evaluate", "evaluate_mc.json", "b"), kOk);
  ASSERT_EQ(run("evaluate", "evaluate_mc.json", "c", Format::kCsv, 12), kOk);
  for (const char* name : {"report.csv", "policies.json", "summary.json"}) EXPECT_EQ(file(name, "a"), file(name, "b"));
  EXPECT_NE(file("report.csv", "a"), file("report.csv", "c"));
}

TEST_F(Cli, AuditModularTableIsClean) {
  ASSERT_EQ(run("audit", "audit_modular.json"), kOk);
  auto findings = summary()["findings"];
  for (const auto& [kind, count] : findings.items()) EXPECT_EQ(count, 0) << kind;
  EXPECT_EQ(file("findings.csv"), "kind,buyer,truthful,deviation,gap,gap_exact\n");
}

TEST_F(Cli, AuditPayYourBidFindsDeviations) {
  EXPECT_EQ(run("audit", "audit_pay_your_bid.json"), kFired);
  EXPECT_GT(summary()["findings"]["dsic"].get<int>(), 0);
  EXPECT_NE(file("findings.csv").find("\ndsic-violation,"), std::string::npos);
}

TEST_F(Cli, AuditJsonFormat) {
  EXPECT_EQ(run("audit", "audit_pay_your_bid.json", "a", Format::kJson), kFired);
  auto list = Json::parse(file("findings.json"));
  ASSERT_FALSE(list.empty());
  EXPECT_EQ(list[0]["kind"], "dsic-violation");
}

TEST_F(Cli, AuditEmptyTableIsACoverageError) {
  EXPECT_EQ(run("audit", "audit_empty_table.json"), kRuntimeError);
  EXPECT_NE(summary()["error"].get<std::string>().find("no entry"), std::string::npos);
}

TEST_F(Cli, AuditTransformedBlindPolicy) {
  EXPECT_EQ(run("audit", "audit_blind_k.json"), kOk);
  EXPECT_EQ(summary()["scope"], "conditional");
}

TEST_F(Cli, HarmonicSweepRatiosDecrease) {
  ASSERT_EQ(run("report", "report_harmonic.json"), kOk);
  auto rows = summary()["rows"];
  ASSERT_EQ(rows.size(), 3u);
  const unsigned ms[] = {4, 16, 64};
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(parse_rational(rows[t]["ratio_osw"].get<std::string>()), 1 / harmonic_number(ms[t]));
  }
  auto plot = file("plot.dat");
  EXPECT_EQ(plot.rfind("# m policy", 0), 0u);
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 4);
  auto csv = file("report.csv");
  EXPECT_EQ(csv.rfind("m,instance,policy", 0), 0u);
}

TEST_F(Cli, CorrelatedPairSweepStaysBelowPricingBound) {
  ASSERT_EQ(run("report", "report_correlated_pair.json", "a", Format::kJson), kOk);
  for (const auto& row : summary()["rows"]) {
    if (row["policy"] != "best_fixed_price") continue;
    unsigned m = std::stoi(row["m"].get<std::string>());
    EXPECT_LE(parse_rational(row["ratio_osw"].get<std::string>()), 4 / (2 * harmonic_number(m))) << m;
  }
  EXPECT_EQ(Json::parse(file("report.json")).size(), 4u);
}

TEST_F(Cli, ReportSinglePointGivesOneRow) {
  auto config = parse(R"({"instance": {"generator": "harmonic", "m": 8}, "policies": [{"name": "best_fixed_price"}]})");
  Options options;
  options.out = dir_ / "a";
  ASSERT_EQ(run_command("report", config, options, log_), kOk);
  EXPECT_EQ(summary()["rows"].size(), 1u);
}

TEST_F(Cli, UnknownNamesListTheKnownOnes) {
  EXPECT_EQ(run("generate", "unknown_generator.json"), kConfigInvalid);
  EXPECT_NE(summary()["error"].get<std::string>().find("known: correlated_pair, expert_noise"), std::string::npos);
  try {
    parse(R"({"policies": [{"name": "vickrey"}]})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("blind_k"), std::string::npos);
  }
  EXPECT_THROW(parse(R"({"table": {"builder": "myerson"}})"), ConfigError);
  EXPECT_THROW(parse(R"({"scope": "partial"})"), ConfigError);
  EXPECT_THROW(parse(R"({"evaluation": {"mode": "sampled"}})"), ConfigError);
}

TEST(CliConfig, ShapeErrorsAreRejectedAtParseTime) {
  EXPECT_THROW(parse(R"({"instance": {"generator": "harmonic"}})"), ConfigError);
  EXPECT_THROW(parse(R"({"instance": {"generator": "harmonic", "m": 4, "k": 1}})"), ConfigError);
  EXPECT_THROW(parse(R"({"colour": 1})"), ConfigError);
  EXPECT_THROW(parse(R"({"policies": [{"name": "blind_k"}, {"name": "blind_k"}]})"), ConfigError);
  EXPECT_THROW(parse(R"({"policies": [{"name": "blind_k"}], "assertions": [{"policy": "other", "at_least": 1}]})"),
               ConfigError);
  EXPECT_THROW(parse(R"({"policies": [{"name": "blind_k"}], "assertions": [{"policy": "blind_k"}]})"), ConfigError);
  EXPECT_THROW(parse(R"({"instance": {"generator": "harmonic", "m": 4}, "sweep": {"parameter": "n", "values": [1]}})"),
               ConfigError);
  EXPECT_NO_THROW(parse(R"({"instance": {"generator": "harmonic", "m": 4}, "sweep": {"parameter": "m", "values": [2]}})"));
}

TEST(CliConfig, AssertionDescription) {
  auto config = parse(R"({"policies": [{"id": "x", "name": "blind_k"}],
                          "assertions": [{"policy": "x", "metric": "revenue_over_lp", "at_least": "87/1000"}]})");
  EXPECT_EQ(config.assertions[0].describe(), "x revenue_over_lp >= 87/1000");
  EXPECT_EQ(config.policies[0].name, "blind_k");
}
