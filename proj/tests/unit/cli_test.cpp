#include "pdm/commands.hpp"
#include "pdm/model_io.hpp"

#include "toys.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pdm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / (std::string("pdm_cli_test_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        std::mt19937_64 rng(71);
        toy_ = pdm::testing::random_toy(rng, {40, 4, 0.0, 0.8, 0.05});
        std::ofstream f(path("train.txt"));
        for (const auto &p : toy_.patterns) {
            f << p.label;
            for (const auto &x : p.features) f << ' ' << x.index + 1 << ':' << format_double(x.value);
            f << '\n';
        }
    }
    void TearDown() override { fs::remove_all(dir_); }

    [[nodiscard]] std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
    pdm::testing::Toy toy_;
};

TEST_F(Cli, TrainWithOracleWritesReportAndModel) {
    const auto r = run_cli({"train", "--data", path("train.txt"), "--delta", "0", "--epsilon", "0.1", "--oracle",
                            "--out-model", path("m.model")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc["converged"], true);
    EXPECT_EQ(doc["sandwich"], "pass");
    EXPECT_EQ(doc["m"], 40);
    EXPECT_TRUE(fs::exists(path("m.model")));

    const auto p = run_cli({"predict", "--model", path("m.model"), "--data", path("train.txt")});
    ASSERT_EQ(p.code, 0);
    EXPECT_EQ(p.err, "errors 0/40 (rate 0)\n");
    std::istringstream lines(p.out);
    std::string line;
    std::size_t k = 0;
    while (std::getline(lines, line)) EXPECT_EQ(line, toy_.patterns[k++].label > 0 ? "+1" : "-1");
    EXPECT_EQ(k, 40u);
}

TEST_F(Cli, DeterministicReports) {
    const std::vector<std::string> args{"train", "--data", path("train.txt"), "--algo", "pdm-succ", "--epsilon", "0.01",
                                        "--seed", "5", "--out-model", path("a.model")};
    const auto a = run_cli(args);
    auto args_b = args;
    args_b.back() = path("b.model");
    const auto b = run_cli(args_b);
    ASSERT_EQ(a.code, 0);
    auto ja = json::parse(a.out), jb = json::parse(b.out);
    ja.erase("wall_seconds");
    jb.erase("wall_seconds");
    EXPECT_EQ(ja, jb);
    std::ifstream fa(path("a.model")), fb(path("b.model"));
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"train", "--data", path("train.txt"), "--algo", "pfm"}).code, 2);
    EXPECT_EQ(run_cli({"train", "--data", path("train.txt"), "--algo", "pdm", "--epsilon", "0"}).code, 2);
    EXPECT_EQ(run_cli({"train", "--data", path("train.txt"), "--algo", "svm", "--epsilon", "0.1"}).code, 2);
    EXPECT_EQ(run_cli({"train", "--data", path("missing.txt"), "--epsilon", "0.1"}).code, 4);
    EXPECT_EQ(run_cli({"predict", "--model", path("missing.model"), "--data", path("train.txt")}).code, 4);
    EXPECT_EQ(run_cli({"experiment", "--data", path("train.txt"), "--algo", "pfm", "--beta", "0.1"}).code, 2);
    EXPECT_EQ(run_cli({"train", "--help"}).code, 0);

    std::ofstream(path("bad.txt")) << "+1 1:0.5\n+1 2:x\n";
    const auto bad = run_cli({"train", "--data", path("bad.txt"), "--epsilon", "0.1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find('2'), std::string::npos);

    // A fixed margin far above anything achievable exhausts the epoch guard.
    const auto stuck = run_cli({"train", "--data", path("train.txt"), "--delta", "0", "--algo", "pfm", "--beta", "10",
                                "--max-epochs", "5", "--out-report", path("r.json")});
    EXPECT_EQ(stuck.code, 3);
    std::ifstream report(path("r.json"));
    EXPECT_EQ(json::parse(report)["converged"], false);
}

TEST_F(Cli, Experiment) {
    const auto r = run_cli({"experiment", "--data", path("train.txt"), "--epsilon", "0.1", "--out-dynamic",
                            path("dyn.json"), "--out-fixed", path("fixed.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_GE(doc["margin_gain"].get<double>(), 0.0);
    EXPECT_TRUE(fs::exists(path("dyn.json")));
    EXPECT_TRUE(fs::exists(path("fixed.json")));
}

TEST(CliBounds, PrintsAllBounds) {
    const auto r = run_cli({"bounds", "--epsilon", "0.75", "--radius", "2", "--gamma-d", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("theorem2_loose 9\n"), std::string::npos);
    EXPECT_NE(r.out.find("theorem2_tightened 7.5\n"), std::string::npos);
    EXPECT_EQ(run_cli({"bounds", "--epsilon", "0.5", "--radius", "0.5", "--gamma-d", "1"}).code, 2);
}

}  // namespace
}  // namespace pdm
