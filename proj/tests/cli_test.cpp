#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "rieszflow/map_json.hpp"

using namespace rieszflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rieszflow");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("rieszflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_map(const std::string& name, const MapSpec& m) {
        const fs::path p = dir_ / name;
        save_map(m, p);
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, VerifyExitCodes) {
    const auto shift = run_cli({"verify", "--map", write_map("shift.json", MapSpec::shift(2)).string()});
    EXPECT_EQ(shift.code, cli::kExitOk);
    EXPECT_NE(shift.out.find("\"Orthonormal\""), std::string::npos);

    const fs::path out = dir_ / "cert";
    const auto affine =
        run_cli({"verify", "--map", write_map("affine.json", MapSpec::affine(2, 0)).string(), "--out", out.string()});
    EXPECT_EQ(affine.code, cli::kExitOk);
    EXPECT_NE(affine.out.find("\"Riesz\""), std::string::npos);
    EXPECT_EQ(slurp(out / "certificate.json"), affine.out);

    const fs::path bad = dir_ / "bad.json";
    std::ofstream(bad) << "{\"dimension\": 1, \"blocks\": [";
    const fs::path bad_out = dir_ / "bad_out";
    const auto malformed = run_cli({"verify", "--map", bad.string(), "--out", bad_out.string()});
    EXPECT_EQ(malformed.code, cli::kExitError);
    EXPECT_FALSE(fs::exists(bad_out / "certificate.json"));
    EXPECT_NE(malformed.err.find("error"), std::string::npos);

    EXPECT_EQ(run_cli({"verify"}).code, cli::kExitError);
}

TEST_F(CliTest, VerifyInconclusiveExitCode) {
    const auto contracted = run_cli({"verify", "--map", write_map("c.json", MapSpec::affine(0.5, 0)).string()});
    EXPECT_EQ(contracted.code, cli::kExitInconclusive);
    const auto wide = run_cli({"verify", "--map", write_map("c2.json", MapSpec::affine(0.5, 0)).string(),
                               "--quad-domain=-20:20", "--quad-panels", "128"});
    EXPECT_EQ(wide.code, cli::kExitOk);
}

TEST_F(CliTest, FiguresWithIdentityMap) {
    const auto r = run_cli({"figures", "--map", write_map("id.json", MapSpec::identity()).string(), "--out",
                            dir_.string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_FALSE(fs::exists(dir_ / "map.json"));

    const auto fig1 = read_csv(dir_ / "fig1_target.csv");
    ASSERT_EQ(fig1.size(), 402u);
    EXPECT_EQ(fig1[0], (std::vector<std::string>{"x", "f"}));
    EXPECT_EQ(std::stod(fig1[201][0]), 0.0);
    EXPECT_EQ(std::stod(fig1[201][1]), 0.0);

    const auto fig2 = read_csv(dir_ / "fig2_map.csv");
    for (std::size_t i = 1; i < fig2.size(); ++i) EXPECT_EQ(fig2[i][0], fig2[i][1]);

    const auto fig3 = read_csv(dir_ / "fig3_convergence.csv");
    ASSERT_EQ(fig3.size(), 21u);
    EXPECT_EQ(fig3[0], (std::vector<std::string>{"N", "err_hermite", "err_perturbed"}));
    for (std::size_t i = 1; i < fig3.size(); ++i) {
        EXPECT_EQ(std::stoi(fig3[i][0]), static_cast<int>(i));
        EXPECT_EQ(fig3[i][1], fig3[i][2]);
    }

    const auto fig4 = read_csv(dir_ / "fig4_bases.csv");
    ASSERT_EQ(fig4[0].size(), 11u);
    EXPECT_EQ(fig4[0][1], "gamma_0");
    EXPECT_EQ(fig4[0][6], "perturbed_0");
    for (std::size_t i = 1; i < fig4.size(); ++i)
        for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(fig4[i][1 + k], fig4[i][6 + k]);
}

TEST_F(CliTest, FiguresAreDeterministic) {
    const std::string map = write_map("m.json", MapSpec::affine(1.2, 0.3)).string();
    ASSERT_EQ(run_cli({"figures", "--map", map, "--out", (dir_ / "a").string()}).code, cli::kExitOk);
    ASSERT_EQ(run_cli({"figures", "--map", map, "--out", (dir_ / "b").string()}).code, cli::kExitOk);
    for (const char* f : {"fig1_target.csv", "fig2_map.csv", "fig3_convergence.csv", "fig4_bases.csv"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST_F(CliTest, FiguresFailWritesNothing) {
    const auto r = run_cli({"figures", "--target", "parabola", "--out", dir_.string()});
    EXPECT_EQ(r.code, cli::kExitError);
    EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, OptimizeWritesLoadableMapAndTrace) {
    const auto a = run_cli({"optimize", "--iters", "5", "--seed", "3", "--out", (dir_ / "a").string()});
    ASSERT_EQ(a.code, cli::kExitOk) << a.err;
    const MapSpec m = load_map(dir_ / "a" / "map.json");
    EXPECT_TRUE(m.residuals_constrained());
    const auto trace = read_csv(dir_ / "a" / "trace.csv");
    ASSERT_EQ(trace.size(), 7u);
    EXPECT_EQ(trace[0], (std::vector<std::string>{"iter", "l2_error"}));

    ASSERT_EQ(run_cli({"optimize", "--iters", "5", "--seed", "3", "--out", (dir_ / "b").string()}).code,
              cli::kExitOk);
    EXPECT_EQ(slurp(dir_ / "a" / "map.json"), slurp(dir_ / "b" / "map.json"));
    EXPECT_EQ(slurp(dir_ / "a" / "trace.csv"), slurp(dir_ / "b" / "trace.csv"));
}

TEST_F(CliTest, Approximate) {
    const auto r = run_cli({"approximate", "--target", "shifted-gaussian:0", "--n", "4", "--out", dir_.string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto conv = read_csv(dir_ / "convergence.csv");
    ASSERT_EQ(conv.size(), 5u);
    EXPECT_EQ(conv[0], (std::vector<std::string>{"N", "l2_error"}));
    EXPECT_LT(std::stod(conv[1][1]), 1e-9);
    EXPECT_TRUE(fs::exists(dir_ / "expansion.json"));
}

TEST_F(CliTest, BadFlags) {
    EXPECT_EQ(run_cli({"approximate", "--quad-domain=3:1", "--out", dir_.string()}).code, cli::kExitError);
    EXPECT_EQ(run_cli({"approximate", "--quad-domain=abc", "--out", dir_.string()}).code, cli::kExitError);
    EXPECT_EQ(run_cli({"approximate", "--quad-order", "99"}).code, cli::kExitError);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitError);
    EXPECT_EQ(run_cli({}).code, cli::kExitError);
    EXPECT_TRUE(fs::is_empty(dir_));
}
