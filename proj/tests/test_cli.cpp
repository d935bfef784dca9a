#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace gpfa {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gpfa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "gpfa");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(CliTest, GenerateDefaultsAndDeterminism) {
    ASSERT_EQ(run({"generate", "--output", path("a"), "--seed", "4"}), 0) << err_.str();
    EXPECT_EQ(io::read_series(dir_ / "a" / "train.csv").samples(), 700);
    const TimeSeries test = io::read_series(dir_ / "a" / "test.csv");
    EXPECT_EQ(test.samples(), 100);
    EXPECT_EQ(test.dims(), 10);

    ASSERT_EQ(run({"generate", "--output", path("b"), "--seed", "4"}), 0);
    EXPECT_EQ(slurp(dir_ / "a" / "train.csv"), slurp(dir_ / "b" / "train.csv"));

    EXPECT_EQ(run({"generate", "--output", path("a"), "--seed", "4"}), cli::kData);
    EXPECT_EQ(run({"generate", "--output", path("a"), "--seed", "5", "--overwrite"}), 0);

    ASSERT_EQ(run({"generate", "--output", path("c"), "--n", "2"}), 0);
    EXPECT_EQ(io::read_series(dir_ / "c" / "train.csv").dims(), 2);
}

TEST_F(CliTest, TrainProjectEvaluate) {
    ASSERT_EQ(run({"generate", "--output", path("d"), "--seed", "8"}), 0);
    ASSERT_EQ(run({"train", "--input", path("d/train.csv"), "--output", path("m.txt"), "--diagnostics",
                   path("diag.csv"), "--dump-graph", path("g.tsv")}),
              0)
        << err_.str();
    EXPECT_TRUE(fs::exists(path("m.txt.whitening")));
    EXPECT_EQ(io::read_model(path("m.txt")).algorithm, Algorithm::Gpfa2);
    std::ifstream diag(path("diag.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(diag, line)) ++lines;
    EXPECT_EQ(lines, 51);
    EXPECT_GT(fs::file_size(path("g.tsv")), 0u);

    ASSERT_EQ(run({"project", "--model", path("m.txt"), "--input", path("d/test.csv"), "--output", path("y.csv")}), 0);
    const Matrix y = io::read_series(path("y.csv")).values;
    EXPECT_EQ(y.cols(), 2);

    ASSERT_EQ(run({"evaluate", "--model", path("m.txt"), "--input", path("d/test.csv"), "--output", path("r.csv")}), 0);
    const Matrix direct = io::read_series(path("y.csv")).values;
    const double expected = evaluate_predictability(direct, 1, 10).mean_trace;
    std::ifstream report(path("r.csv"));
    std::getline(report, line);
    std::getline(report, line);
    EXPECT_EQ(line.rfind("gpfa2,star,1,10,10,2,50,0,0,100,10,", 0), 0u) << line;
    const auto fields = cli::clean_list([&] {
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) parts.push_back(f);
        return parts;
    }());
    ASSERT_EQ(fields.size(), 16u);
    EXPECT_EQ(std::stod(fields[13]), expected);
    EXPECT_NEAR(expected, 1.0, 0.35);
}

TEST_F(CliTest, EvaluateConstantDataIsZero) {
    io::write_series(Matrix::Constant(40, 2, 1.5), path("c.csv"));
    ASSERT_EQ(run({"evaluate", "--input", path("c.csv")}), 0);
    EXPECT_NE(out_.str().find("identity,none,"), std::string::npos);
    EXPECT_NE(out_.str().find(",1,0,0,"), std::string::npos) << out_.str();
}

TEST_F(CliTest, ConfigFileAndOverrides) {
    std::ofstream(path("c.cfg")) << "# toy sweep\nalgorithms=sfa,random\nrepetitions=2\nsweep-axis=N\nsweep-values=3,4\n";
    ASSERT_EQ(run({"benchmark", "--config", path("c.cfg"), "--algorithms", "sfa"}), 0) << err_.str();
    std::istringstream lines(out_.str());
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].rfind("sfa,none,1,10,10,2,50,0,700,100,3,0,2,", 0), 0u) << rows[1];
    EXPECT_EQ(rows[2].rfind("sfa,none,1,10,10,2,50,0,700,100,4,0,2,", 0), 0u) << rows[2];

    std::ofstream(path("bad.cfg")) << "colour=blue\n";
    EXPECT_EQ(run({"benchmark", "--config", path("bad.cfg")}), cli::kUsage);
}

TEST_F(CliTest, BenchmarkEmptySweepAndAppend) {
    ASSERT_EQ(run({"benchmark", "--sweep-axis", "k", "--sweep-values", "", "--output", path("b.csv")}), 0);
    EXPECT_EQ(slurp(path("b.csv")), std::string(io::report_header) + "\n");
    ASSERT_EQ(run({"benchmark", "--algorithms", "random", "--repetitions", "2", "--output", path("b.csv")}), 0);
    ASSERT_EQ(run({"benchmark", "--algorithms", "random", "--repetitions", "2", "--output", path("b.csv")}), 0);
    std::ifstream in(path("b.csv"));
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 3);
}

TEST_F(CliTest, BenchmarkOnUserSeries) {
    io::write_series(generate_toy(400, 4, 2), path("s.csv"));
    ASSERT_EQ(run({"benchmark", "--input", path("s.csv"), "--algorithms", "gpfa1", "--s-train", "250", "--s-test",
                   "100", "--R", "3", "--repetitions", "2"}),
              0)
        << err_.str();
    EXPECT_NE(out_.str().find("gpfa1,clique,1,10,10,2,3,0,250,100,4,0,2,"), std::string::npos) << out_.str();
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({}), cli::kUsage);
    EXPECT_EQ(run({"frobnicate"}), cli::kUsage);
    EXPECT_EQ(run({"train", "--k", "abc"}), cli::kUsage);
    EXPECT_EQ(run({"train", "--input", path("missing.csv"), "--output", path("m")}), cli::kData);
    EXPECT_EQ(run({"benchmark", "--algorithms", "magic"}), cli::kUsage);
    ASSERT_EQ(run({"generate", "--output", path("d")}), 0);
    EXPECT_EQ(run({"train", "--input", path("d/train.csv"), "--output", path("m"), "--M", "12"}), cli::kNumerical);
    EXPECT_EQ(run({"--help"}), 0);
}

// gpfa2 against sfa on identical toy data, seed by seed.
TEST_F(CliTest, GpfaBeatsSfaSeedBySeed) {
    ExperimentParams p;
    p.algorithm = Algorithm::Gpfa2;
    const ExperimentStats gpfa = run_experiment(DatasetSource{}, p, 50, 0);
    p.algorithm = Algorithm::Sfa;
    const ExperimentStats sfa = run_experiment(DatasetSource{}, p, 50, 0);
    int wins = 0;
    for (std::size_t i = 0; i < 50; ++i) wins += gpfa.values[i] < sfa.values[i] ? 1 : 0;
    EXPECT_GE(wins, 45);
}

}  // namespace
}  // namespace gpfa
