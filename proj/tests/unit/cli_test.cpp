#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"

namespace beamdecay::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("beamdecay_cli_") + info->name());
        fs::remove_all(dir_);
        unsetenv("BEAMDECAY_OUT");
    }
    void TearDown() override { fs::remove_all(dir_); }

    int invoke(const std::string& command, std::vector<std::string> overrides,
               const std::optional<std::string>& config = std::nullopt) {
        RunManifest m;
        m.command = command;
        m.output_dir = dir_.string();
        m.overrides = std::move(overrides);
        if (config) m.config_path = std::string(BEAMDECAY_CONFIG_DIR) + "/" + *config;
        out_.str("");
        err_.str("");
        return run(m, out_, err_);
    }

    std::string slurp(const std::string& name) const {
        std::ifstream in(dir_ / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::vector<std::string>> rows(const std::string& name) const {
        std::vector<std::vector<std::string>> out;
        std::istringstream in(slurp(name));
        std::string line;
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string c;
            while (std::getline(ls, c, ',')) cells.push_back(c);
            out.push_back(cells);
        }
        return out;
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

TEST(ConfigTest, OverridesParseJsonOrString) {
    Json c = Json::object();
    apply_override(c, "beam.gamma=0.5");
    apply_override(c, "beam.preset=strip");
    apply_override(c, "sweep.ka=[0,0.01]");
    EXPECT_EQ(c["beam"]["gamma"].get<double>(), 0.5);
    EXPECT_EQ(c["beam"]["preset"].get<std::string>(), "strip");
    EXPECT_EQ(c["sweep"]["ka"].size(), 2u);
    EXPECT_THROW(apply_override(c, "novalue"), Error);
    EXPECT_THROW(apply_override(c, "a..b=1"), Error);
}

TEST(ConfigTest, BeamFromFields) {
    Json c = Json::parse(R"({"beam": {"length": 1.0, "mass": {"sampled": [1, 2, 3]},
                                      "rigidity": {"piecewise": {"breakpoints": [0.5], "values": [1, 2]}},
                                      "gamma": 0.3}})");
    const auto spec = beam_from_config(c);
    EXPECT_EQ(spec.mass.kind(), CoefficientField::Kind::sampled);
    EXPECT_EQ(spec.rigidity.kind(), CoefficientField::Kind::piecewise_constant);
    EXPECT_NEAR(spec.damping.at(1.0, 1.0), 0.9, 1e-15);
    EXPECT_THROW(beam_from_config(Json::parse(R"({"beam": {"length": 1}})")), Error);
    EXPECT_THROW(beam_from_config(Json::parse(R"({"beam": {"preset": "nope"}})")), Error);
}

TEST(ConfigTest, IntegratorAuto) {
    const auto spec = beam_from_config(Json::parse(R"({"beam": {"preset": "strip", "gamma": 1}})"));
    const auto beam = assemble(spec, {}, uniform_mesh(spec.length, 8));
    const auto ic = integrator_from_config(Json::parse(R"({"integrator": {"t_final": 1}})"), beam);
    EXPECT_DOUBLE_EQ(ic.dt, default_time_step(beam, 1.0));
    EXPECT_GE(ic.snapshot_stride, 1);
    EXPECT_THROW(integrator_from_config(Json::parse(R"({"integrator": {"dt": "fast"}})"), beam), Error);
}

TEST(CsvTest, FormatDouble) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_double(NAN), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    EXPECT_EQ(round_half_even(0.125, 2), 0.12);
    EXPECT_EQ(round_half_even(16.7438, 2), 16.74);
}

TEST(CsvTest, RowWidthIsEnforced) {
    CsvTable t({"a", "b"});
    t.add(1).add("x");
    t.end_row();
    t.add(1);
    EXPECT_ANY_THROW(t.end_row());
}

TEST(GoldenTest, NineteenOfTwentyFourCellsMatch) {
    const auto cells = golden_cells(decay_table(strip_table_inputs()));
    ASSERT_EQ(cells.size(), 24u);
    int ok = 0;
    for (const auto& c : cells) ok += c.ok ? 1 : 0;
    EXPECT_EQ(ok, 19);
    for (const auto& c : cells)
        if (c.column == "beta0") EXPECT_TRUE(c.ok);
}

TEST_F(CliTest, CertifyWritesFilesAndSummary) {
    EXPECT_EQ(invoke("certify", {"boundary.ka_left=0", "boundary.ka_right=0"}, "certify_strip.json"),
              kExitSuccess);
    EXPECT_NE(out_.str().find("M=1.03"), std::string::npos) << out_.str();
    EXPECT_NE(out_.str().find("sigma=0.08"), std::string::npos);
    const auto cert = rows("certificate.csv");
    ASSERT_EQ(cert.size(), 2u);
    EXPECT_EQ(cert[0].size(), 13u);
    EXPECT_EQ(rows("envelope.csv").size(), 1002u);
}

TEST_F(CliTest, CertifyIneligibleAndInvalid) {
    EXPECT_EQ(invoke("certify", {"beam.gamma=0"}, "certify_strip.json"), kExitIneligible);
    EXPECT_NE(err_.str().find("CERTIFICATE_INELIGIBLE"), std::string::npos);
    EXPECT_EQ(invoke("certify", {"boundary.ka_left=-1"}, "certify_strip.json"), kExitConfig);
    EXPECT_EQ(invoke("certify", {"certificate.lambda=5"}, "certify_strip.json"),
              exit_code_for(ErrorCode::lambda_inadmissible));
}

TEST_F(CliTest, Table1ReportsMismatches) {
    EXPECT_EQ(invoke("table1", {}, "table1.json"), kExitGoldenMismatch);
    EXPECT_EQ(rows("table1.csv").size(), 7u);
    // Only the gamma = 0.1 rows, which reproduce.
    EXPECT_EQ(invoke("table1", {"gamma_list=[0.1]", "lambda_policy=table"}), kExitSuccess);
    EXPECT_EQ(rows("table1-1.csv").size(), 3u);
}

TEST_F(CliTest, SimulateConservative) {
    EXPECT_EQ(invoke("simulate", {"integrator.t_final=1"}, "conservative.json"), kExitSuccess)
        << err_.str();
    EXPECT_NE(out_.str().find("constant energy"), std::string::npos) << out_.str();
    const auto ledger = rows("ledger.csv");
    EXPECT_EQ(ledger[0][0], "t");
    EXPECT_EQ(ledger.size(), 102u);
}

TEST_F(CliTest, SimulateZeroState) {
    EXPECT_EQ(invoke("simulate", {"integrator.t_final=0.1", "initial.deflection={\"kind\":\"zero\"}"},
                     "conservative.json"),
              kExitSuccess);
    EXPECT_NE(out_.str().find("ZERO_ENERGY"), std::string::npos) << out_.str();
}

TEST_F(CliTest, SweepGridAndCap) {
    EXPECT_EQ(invoke("sweep", {}, "sweep_ka.json"), kExitSuccess) << err_.str();
    const auto s = rows("sweep.csv");
    ASSERT_EQ(s.size(), 5u);
    EXPECT_EQ(invoke("sweep", {"sweep.ka=[]"}, "sweep_ka.json"), kExitSuccess);
    EXPECT_EQ(rows("sweep-1.csv").size(), 1u);
    EXPECT_EQ(invoke("sweep", {"sweep.max_points=2"}, "sweep_ka.json"), kExitResourceCap);
}

TEST_F(CliTest, CheckSingleSuiteAndFailure) {
    EXPECT_EQ(invoke("check", {"suite=poincare", "profiles=50"}), kExitSuccess) << err_.str();
    EXPECT_EQ(rows("check.csv").size(), 2u);
    EXPECT_EQ(invoke("check", {"suite=sandwich", "sandwich_trials=100", "beta0_scale=0.1"}),
              kExitPropertyFailure);
    EXPECT_TRUE(fs::exists(dir_ / "counterexample_sandwich.csv"));
    EXPECT_EQ(invoke("check", {"suite=bogus"}), kExitConfig);
}

TEST_F(CliTest, EnvironmentOutputDirectoryWins) {
    const auto alt = dir_ / "alt";
    setenv("BEAMDECAY_OUT", alt.c_str(), 1);
    EXPECT_EQ(invoke("certify", {}, "certify_strip.json"), kExitSuccess);
    unsetenv("BEAMDECAY_OUT");
    EXPECT_TRUE(fs::exists(alt / "certificate.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "certificate.csv"));
}

TEST_F(CliTest, OutputIsByteIdentical) {
    EXPECT_EQ(invoke("simulate", {"integrator.t_final=0.5", "beam.gamma=0.5"}, "conservative.json"),
              kExitSuccess);
    EXPECT_EQ(invoke("simulate", {"integrator.t_final=0.5", "beam.gamma=0.5"}, "conservative.json"),
              kExitSuccess);
    EXPECT_EQ(slurp("ledger.csv"), slurp("ledger-1.csv"));
    EXPECT_EQ(slurp("trajectory.csv"), slurp("trajectory-1.csv"));
}

TEST_F(CliTest, MissingConfigFile) {
    RunManifest m;
    m.command = "certify";
    m.config_path = "/nonexistent/config.json";
    m.output_dir = dir_.string();
    EXPECT_EQ(run(m, out_, err_), kExitConfig);
}

TEST(ToolTest, BadArgumentsExitWithConfigCode) {
    const std::string cmd = std::string(BEAMDECAY_TOOL) + " certify --bogus > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), kExitConfig);
}

}  // namespace
}  // namespace beamdecay::cli
