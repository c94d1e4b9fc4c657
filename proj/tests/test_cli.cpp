#include "dao/cli.hpp"

#include "dao/neighbors.hpp"
#include "dao/report.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using dao::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_ext(const fs::path& dir, const std::string& ext) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        n += e.path().extension() == ext ? 1 : 0;
    }
    return n;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        root = fs::temp_directory_path() /
               ("dao_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root);
        fs::create_directories(root);
    }
    void TearDown() override { fs::remove_all(root); }

    // Small clusters keep the end-to-end runs fast.
    void gen_small(const fs::path& dir, const std::string& dims, const std::string& reps = "1") {
        const auto r = invoke({"gen", "--reps", reps, "--dims", dims, "--seed", "7", "--cluster-size", "80",
                               "--out", dir.string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    Result run_small(const fs::path& data, const fs::path& out, std::vector<std::string> extra = {}) {
        std::vector<std::string> args{"run", "--data", data.string(), "--out", out.string(), "--k", "5..30:5",
                                      "--lid-k", "10,30"};
        args.insert(args.end(), extra.begin(), extra.end());
        return invoke(args);
    }

    fs::path root;
};

} // namespace

TEST(IntList, Ranges) {
    EXPECT_EQ(dao::cli::parse_int_list("5..20:5,7"), (std::vector<long>{5, 10, 15, 20, 7}));
    EXPECT_EQ(dao::cli::parse_int_list("3"), (std::vector<long>{3}));
    EXPECT_EQ(dao::cli::parse_int_list("2..32:2").size(), 16u);
    EXPECT_ANY_THROW(dao::cli::parse_int_list("5..2"));
    EXPECT_ANY_THROW(dao::cli::parse_int_list("a"));
    EXPECT_ANY_THROW(dao::cli::parse_int_list("1,,2"));
}

TEST_F(CliTest, GenWritesCsvAndSidecarPerDataset) {
    gen_small(root / "d", "2..32:2", "2");
    EXPECT_EQ(count_ext(root / "d", ".csv"), 32u);
    EXPECT_EQ(count_ext(root / "d", ".json"), 32u);
}

TEST_F(CliTest, GenIsDeterministic) {
    gen_small(root / "a", "4,8");
    gen_small(root / "b", "4,8");
    for (const auto& e : fs::directory_iterator(root / "a")) {
        EXPECT_EQ(slurp(e.path()), slurp(root / "b" / e.path().filename())) << e.path();
    }
}

TEST_F(CliTest, GenRejectsDimensionAboveAmbient) {
    const auto r = invoke({"gen", "--dims", "40", "--out", (root / "x").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("40"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);
    EXPECT_EQ(invoke({"run"}).code, 1);
    EXPECT_EQ(invoke({"run", "--data", root.string(), "--detectors", "COF"}).code, 1);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, RunWritesOneRowPerDetectorAndIsRepeatable) {
    gen_small(root / "d", "8");
    const auto r = run_small(root / "d", root / "r1.csv");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto records = dao::read_records(root / "r1.csv");
    ASSERT_EQ(records.size(), 4u);
    EXPECT_EQ(records[0].dim_c1, 8);
    EXPECT_EQ(records[0].dim_c2, 8);
    ASSERT_EQ(run_small(root / "d", root / "r2.csv").code, 0);
    EXPECT_EQ(slurp(root / "r1.csv"), slurp(root / "r2.csv"));
}

TEST_F(CliTest, CorruptedCsvIsNamedDataError) {
    fs::create_directories(root / "bad");
    std::ofstream(root / "bad" / "broken.csv") << "x0,x1,label\n1,2,0\n3,oops,1\n5,6,0\n";
    const auto r = run_small(root / "bad", root / "r.csv");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("broken.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnlabeledDatasetsAreSkipped) {
    fs::create_directories(root / "u");
    std::ofstream out(root / "u" / "plain.csv");
    out << "a,b\n";
    for (int i = 0; i < 50; ++i) {
        out << i << ',' << (i * 7) % 13 + 0.5 * i << '\n';
    }
    out.close();
    const auto r = run_small(root / "u", root / "r.csv");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("skipped"), std::string::npos);
}

TEST_F(CliTest, ThreadCountAndCacheDoNotChangeOutput) {
    gen_small(root / "d", "2,16");
    ASSERT_EQ(run_small(root / "d", root / "t1.csv", {"--threads", "1"}).code, 0);
    ASSERT_EQ(run_small(root / "d", root / "t4.csv", {"--threads", "4"}).code, 0);
    ASSERT_EQ(run_small(root / "d", root / "c.csv", {"--cache", (root / "cache").string()}).code, 0);
    ASSERT_EQ(run_small(root / "d", root / "c2.csv", {"--cache", (root / "cache").string()}).code, 0);
    EXPECT_EQ(slurp(root / "t1.csv"), slurp(root / "t4.csv"));
    EXPECT_EQ(slurp(root / "t1.csv"), slurp(root / "c.csv"));
    EXPECT_EQ(slurp(root / "t1.csv"), slurp(root / "c2.csv"));
    EXPECT_EQ(count_ext(root / "cache", ".knn"), 2u);
}

TEST_F(CliTest, ThreadsEnvironmentVariable) {
    gen_small(root / "d", "4");
    ::setenv("DAO_THREADS", "2", 1);
    const auto r = run_small(root / "d", root / "env.csv");
    ::unsetenv("DAO_THREADS");
    ASSERT_EQ(r.code, 0);
    ASSERT_EQ(run_small(root / "d", root / "plain.csv").code, 0);
    EXPECT_EQ(slurp(root / "env.csv"), slurp(root / "plain.csv"));
}

TEST_F(CliTest, TimingGoesToItsOwnFile) {
    gen_small(root / "d", "8");
    const auto r = run_small(root / "d", root / "r.csv", {"--timing", (root / "t.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(root / "t.csv"));
    EXPECT_EQ(slurp(root / "t.csv").substr(0, 8), "dataset,");
    ASSERT_EQ(run_small(root / "d", root / "r2.csv").code, 0);
    EXPECT_EQ(slurp(root / "r.csv"), slurp(root / "r2.csv"));
}

TEST_F(CliTest, ReportEndToEnd) {
    gen_small(root / "d", "2,8,16,32", "2");
    ASSERT_EQ(run_small(root / "d", root / "r.csv").code, 0);
    const auto r = invoke({"report", "--records", (root / "r.csv").string(), "--out", (root / "rep").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto* f : {"fig1.csv", "fig1.svg", "fig2.csv", "table2.csv", "table3.csv", "ranks.csv"}) {
        EXPECT_TRUE(fs::exists(root / "rep" / f)) << f;
    }
    std::ifstream fig1(root / "rep" / "fig1.csv");
    std::string line;
    std::size_t rows = 0;
    std::getline(fig1, line);
    while (std::getline(fig1, line)) {
        rows += line.empty() ? 0 : 1;
    }
    EXPECT_EQ(rows, 16u);
    std::ifstream table(root / "rep" / "table2.csv");
    std::getline(table, line);
    EXPECT_EQ(line, "pair,m,p,rho");

    const auto again = invoke({"report", "--records", (root / "r.csv").string(), "--out", (root / "rep2").string()});
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(slurp(root / "rep" / "ranks.csv"), slurp(root / "rep2" / "ranks.csv"));
    EXPECT_EQ(slurp(root / "rep" / "fig1.svg"), slurp(root / "rep2" / "fig1.svg"));
}

TEST_F(CliTest, ReportOnSingleDatasetIsIncompleteGrid) {
    gen_small(root / "d", "8");
    ASSERT_EQ(run_small(root / "d", root / "r.csv").code, 0);
    const auto r = invoke({"report", "--records", (root / "r.csv").string(), "--analysis", "ranks", "--out",
                           (root / "rep").string()});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("2 datasets required"), std::string::npos) << r.err;
}

TEST_F(CliTest, LidScoreAndCacheCommands) {
    gen_small(root / "d", "4");
    const auto csv = root / "d" / "synth_c1-8_c2-4_s7.csv";
    auto r = invoke({"lid", "--data", csv.string(), "--estimator", "TwoNN", "--k", "10", "--out",
                     (root / "lid.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(root / "lid.csv").substr(0, 16), "index,id,log_id\n");
    r = invoke({"score", "--data", csv.string(), "--detector", "DAO", "--k", "10", "--lid-k", "20", "--out",
                (root / "s.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    r = invoke({"knn-cache", "--data", csv.string(), "--kmax", "12", "--out", (root / "c").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const fs::path cache_file(r.out.substr(0, r.out.find('\n')));
    EXPECT_EQ(fs::file_size(cache_file), 16u + 160u * 12u * 12u);
    EXPECT_EQ(dao::read_graph(cache_file).kmax(), 12);
    r = invoke({"lid", "--data", csv.string(), "--k", "500", "--out", (root / "x.csv").string()});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
    std::ofstream(root / "c.toml") << "[gen]\nreps = 2\ndims = \"4,6\"\ncluster-size = 60\nseed = 5\n";
    const auto r = invoke({"--config", (root / "c.toml").string(), "gen", "--reps", "1", "--out", (root / "d").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_ext(root / "d", ".csv"), 2u);
    EXPECT_TRUE(fs::exists(root / "d" / "synth_c1-8_c2-6_s6.csv"));
}
