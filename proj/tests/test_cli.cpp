// Runs the qcap executable end to end and checks output and exit codes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult qcap(const std::string& args) {
    const std::string cmd = std::string(QCAP_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("qcap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    static std::string read(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, ListsPresets) {
    const CliResult r = qcap("presets");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("fig2a: attenuator tau=0.99, thermal nth=1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("fig5b"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(qcap("").code, 1);
    EXPECT_EQ(qcap("sweep --preset fig9z").code, 1);
    EXPECT_EQ(qcap("sweep --bogus-flag 3").code, 1);
    EXPECT_EQ(qcap("sweep --channel attenuator --tau 1.5 --env thermal --nth 1").code, 1);
    EXPECT_EQ(qcap("sweep --preset fig2a --n-grid 0:5").code, 1);
    EXPECT_EQ(qcap("sweep --config /nonexistent/qcap.json").code, 1);
    EXPECT_EQ(qcap("point --preset fig5a --n 1 --oracle gaussian").code, 1);
    EXPECT_EQ(qcap("consistency").code, 1);
}

TEST_F(CliTest, SweepFromFlags) {
    const CliResult r = qcap("sweep --channel amplifier --kappa 1.02 --env thermal --nth 1 --n-grid 0:2:3");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("# schema=1\n", 0), 0u);
    EXPECT_NE(r.out.find("\nN,q_u1,q_u2,q_l,q_l_clamped,flags\n"), std::string::npos);
    EXPECT_NE(r.out.find("\n2,"), std::string::npos);
}

TEST_F(CliTest, PresetToFileMatchesStdout) {
    const fs::path out = dir_ / "fig3a.csv";
    EXPECT_EQ(qcap("sweep --preset fig3a --out " + out.string()).code, 0);
    const CliResult r = qcap("sweep --preset fig3a");
    EXPECT_EQ(read(out), r.out);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
    const std::string cfg = write("cfg.json", R"({"channel": "attenuator", "tau": 0.9, "env": "thermal", "nth": 1,
        "n_grid": "0:1:2", "units": "bits"})");
    const CliResult file_only = qcap("sweep --config " + cfg);
    EXPECT_EQ(file_only.code, 0);
    EXPECT_NE(file_only.out.find("tau=0.9;"), std::string::npos) << file_only.out;
    EXPECT_NE(file_only.out.find("units=bits"), std::string::npos);

    const CliResult overridden = qcap("sweep --config " + cfg + " --tau 0.5 --units nats");
    EXPECT_EQ(overridden.code, 0);
    EXPECT_NE(overridden.out.find("tau=0.5;"), std::string::npos) << overridden.out;
    EXPECT_NE(overridden.out.find("units=nats"), std::string::npos);
}

TEST_F(CliTest, PointReportsJson) {
    const CliResult r = qcap("point --channel attenuator --tau 0.98 --env thermal --nth 1 --n 1 --oracle gaussian");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("q_u1").get<double>(), 1.96, 1e-12);
    EXPECT_NEAR(j.at("q_l").get<double>(), -2.0, 1e-12);
    EXPECT_NEAR(j.at("i_c_gaussian").get<double>(), 1.0569257065267141 / std::log(2.0), 1e-9);
    EXPECT_TRUE(j.at("flags").empty());
}

TEST_F(CliTest, TruncationFailureExitCode) {
    EXPECT_EQ(qcap("sweep --channel attenuator --tau 0.9 --env thermal --nth 1 --n-grid 0:4:3 --oracle fock --fock-dim 6").code, 3);
    EXPECT_EQ(qcap("point --channel attenuator --tau 0.9 --env thermal --nth 1 --n 4 --oracle fock --fock-dim 6").code, 3);
}

TEST_F(CliTest, ConsistencyGridFile) {
    const std::string grid = write("grid.json", R"({"channels": [{"type": "attenuator", "tau": 0.9}],
        "envs": [{"type": "thermal", "nth": 1}, {"type": "fock", "n": 1}], "n": [0.5, 1]})");
    const CliResult r = qcap("consistency --grid " + grid);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("# points=6 attenuator_failures=0"), std::string::npos) << r.out;

    const CliResult empty = qcap("consistency --grid " + write("empty.json", "{}"));
    EXPECT_EQ(empty.code, 0);
    EXPECT_NE(empty.out.find("# points=0"), std::string::npos);
}

TEST_F(CliTest, BuiltinAmplifierConsistency) {
    const CliResult r = qcap("consistency --builtin amplifier");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("output_photon_offset,wc_photon_offset"), std::string::npos);
    EXPECT_NE(r.out.find("# points=18"), std::string::npos);
}
