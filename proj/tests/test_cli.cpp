#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int exit_code = -1;
    std::string output;
};

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("tsh_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Run run_cli(const std::string& args, const fs::path& log)
{
    const std::string cmd = std::string("\"") + TSH_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sample(const std::string& name) { return std::string("\"") + TSH_SAMPLES_DIR + "/" + name + "\""; }

} // namespace

TEST(Cli, GoldensPass)
{
    auto dir = scratch("goldens");
    auto r = run_cli("goldens", dir / "log");
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("all goldens passed"), std::string::npos);
}

TEST(Cli, ElderRuleMutationIsCaught)
{
    auto dir = scratch("mut_elder");
    auto r = run_cli("goldens --mutate elder-rule", dir / "log");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("FAIL reflection_duality"), std::string::npos) << r.output;
}

TEST(Cli, CriticalPointMutationIsCaught)
{
    auto dir = scratch("mut_crit");
    auto r = run_cli("goldens --mutate critical-points", dir / "log");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("FAIL dense_resampling_curved"), std::string::npos) << r.output;
}

TEST(Cli, DiagramsWritesOneFilePerTrialAndAxis)
{
    auto dir = scratch("diagrams");
    auto r = run_cli("diagrams --input " + sample("fixations.csv") + " --output-dir \"" + dir.string() + "\"", dir / "log");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(report["input_trials"], 25);
    EXPECT_EQ(report["output_trials"], 24);
    EXPECT_EQ(report["skipped"].size(), 1u);
    EXPECT_EQ(report["diagram_files"], 48);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir / "diagrams")) files += e.path().extension() == ".json";
    EXPECT_EQ(files, 48u);
    auto d = nlohmann::json::parse(slurp(dir / "diagrams" / "R01__1__x.json"));
    EXPECT_EQ(d["reader_id"], "R01");
    EXPECT_EQ(d["diagrams"].size(), 1u);
}

TEST(Cli, FeaturesAreByteIdenticalAcrossRuns)
{
    auto a = scratch("features_a"), b = scratch("features_b");
    const std::string args = "features --input " + sample("fixations.csv") + " --config " + sample("config.json") +
                             " --baseline-csv " + sample("baseline.csv") + " --fit-ids " + sample("fit_ids.csv");
    auto ra = run_cli(args + " --output-dir \"" + a.string() + "\"", a / "log");
    auto rb = run_cli(args + " --output-dir \"" + b.string() + "\"", b / "log");
    ASSERT_EQ(ra.exit_code, 0) << ra.output;
    ASSERT_EQ(rb.exit_code, 0) << rb.output;
    const auto csv = slurp(a / "features.csv");
    EXPECT_EQ(csv, slurp(b / "features.csv"));
    EXPECT_EQ(slurp(a / "transforms.json"), slurp(b / "transforms.json"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "reader_id,trial_id,label,tsh_000,tsh_001,tsh_002,tsh_003,tsh_004,tsh_005,tsh_006,tsh_007,bl_000,bl_001,bl_002");
    auto t = nlohmann::json::parse(slurp(a / "transforms.json"));
    EXPECT_EQ(t["fit_rows"], 16);
    EXPECT_EQ(t["image_specs"].size(), 6u);
}

TEST(Cli, ShowConfigResolvesDefaults)
{
    auto dir = scratch("show");
    auto r = run_cli("show-config", dir / "log");
    ASSERT_EQ(r.exit_code, 0);
    auto j = nlohmann::json::parse(r.output);
    EXPECT_EQ(j["pca_components"], 250);
    EXPECT_EQ(j["filtration"]["kind"], "horizontal");
}

TEST(Cli, ErrorsExitWithOne)
{
    auto dir = scratch("errors");
    EXPECT_EQ(run_cli("diagrams", dir / "log").exit_code, 1);
    EXPECT_EQ(run_cli("frobnicate", dir / "log").exit_code, 1);
    auto r = run_cli("diagrams --input \"" + (dir / "missing.csv").string() + "\"", dir / "log");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("cannot open"), std::string::npos);

    std::ofstream(dir / "bad.json") << R"({"persistence_mode": "sideways"})";
    r = run_cli("show-config --config \"" + (dir / "bad.json").string() + "\"", dir / "log");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("persistence_mode"), std::string::npos);

    // One trial cannot support a PCA fit.
    r = run_cli("features --input " + sample("worked_example.csv") + " --output-dir \"" + dir.string() + "\"", dir / "log");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("insufficient"), std::string::npos) << r.output;
}
