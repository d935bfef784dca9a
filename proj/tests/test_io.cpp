#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "gpfa/io.hpp"
#include "oracles.hpp"

namespace gpfa {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("gpfa_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
};

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

TEST_F(IoTest, ReadsPlainAndHeaderedFiles) {
    const TimeSeries plain = io::read_series(write("a.csv", "1.0,2.0\n3.0,4.0"));
    ASSERT_EQ(plain.samples(), 2);
    ASSERT_EQ(plain.dims(), 2);
    EXPECT_EQ(plain.values(1, 0), 3.0);
    EXPECT_TRUE(plain.names.empty());

    const TimeSeries named = io::read_series(write("b.csv", "a,b\r\n1e-3, -2\r\n"));
    EXPECT_EQ(named.names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(named.samples(), 1);
    EXPECT_EQ(named.values(0, 0), 1e-3);
}

TEST_F(IoTest, RejectsMalformedInput) {
    EXPECT_EQ(kind_of([&] { io::read_series(write("nan.csv", "1,2\nnan,3\n")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::read_series(write("inf.csv", "1,inf\n")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::read_series(write("rag.csv", "1,2\n3\n")); }), ErrorKind::RaggedRows);
    EXPECT_EQ(kind_of([&] { io::read_series(write("empty.csv", "")); }), ErrorKind::EmptyFile);
    EXPECT_EQ(kind_of([&] { io::read_series(write("hdr.csv", "a,b\n")); }), ErrorKind::EmptyFile);
    EXPECT_EQ(kind_of([&] { io::read_series(dir_ / "missing.csv"); }), ErrorKind::Io);
    try {
        io::read_series(write("bad.csv", "1,2\n3,4\n5,x\n"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("bad.csv:3"), std::string::npos);
    }
}

TEST_F(IoTest, SeriesRoundTripIsExact) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix m = oracle::random_matrix(100, 7, rng);
        m.col(trial) *= std::pow(10.0, 50 * (trial - 2));
        io::write_series(m, dir_ / "r.csv");
        EXPECT_TRUE(io::read_series(dir_ / "r.csv").values == m);
    }
    io::write_series(TimeSeries{Matrix::Ones(2, 2), {"x", "y"}}, dir_ / "n.csv");
    EXPECT_EQ(io::read_series(dir_ / "n.csv").names, (std::vector<std::string>{"x", "y"}));
}

TEST_F(IoTest, ReportHeaderAndRows) {
    io::write_report({}, dir_ / "empty.csv");
    EXPECT_EQ(slurp(dir_ / "empty.csv"), std::string(io::report_header) + "\n");

    ExperimentStats s;
    s.params.algorithm = Algorithm::Gpfa1;
    s.base_seed = 7;
    s.runs = 3;
    s.mean = 1.25;
    s.stddev = 0.5;
    s.wall_time_seconds = 2.0;
    io::write_report({s}, dir_ / "one.csv");
    io::write_report({s}, dir_ / "one.csv", true);
    std::ifstream in(dir_ / "one.csv");
    std::string header, row, again, extra;
    std::getline(in, header);
    std::getline(in, row);
    std::getline(in, again);
    EXPECT_FALSE(static_cast<bool>(std::getline(in, extra)));
    EXPECT_EQ(header, io::report_header);
    EXPECT_EQ(row, "gpfa1,clique,1,10,10,2,50,0,700,100,10,7,3,1.25,0.5,2");
    EXPECT_EQ(row, again);
}

TEST_F(IoTest, ModelRoundTripIsExact) {
    std::mt19937_64 rng(4);
    ProjectionModel m;
    m.algorithm = Algorithm::Pfa;
    m.extraction = oracle::random_matrix(5, 3, rng);
    m.eigenvalues = oracle::random_matrix(3, 1, rng).col(0);
    m.set_param("p", 2);
    m.set_param("K", 0);
    io::write_model(m, dir_ / "m.txt");
    const ProjectionModel back = io::read_model(dir_ / "m.txt");
    EXPECT_EQ(back.algorithm, Algorithm::Pfa);
    EXPECT_TRUE(back.extraction == m.extraction);
    EXPECT_TRUE(back.eigenvalues == m.eigenvalues);
    EXPECT_EQ(back.params, m.params);

    const std::string text = slurp(dir_ / "m.txt");
    EXPECT_EQ(text.substr(0, text.find('\n')), "algorithm=pfa input_dims=5 output_dims=3 K=0 p=2");

    EXPECT_EQ(kind_of([&] { io::read_model(write("trunc.txt", "algorithm=sfa input_dims=2 output_dims=1\n1 2\n")); }),
              ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::read_model(write("alg.txt", "algorithm=foo input_dims=1 output_dims=1\n1\n0\n")); }),
              ErrorKind::ParseError);
}

TEST_F(IoTest, WhiteningRoundTripIsExact) {
    const Matrix x = generate_toy(300, 4, 5);
    const WhiteningModel w = whiten_fit(x);
    io::write_whitening(w, dir_ / "w.txt");
    const WhiteningModel back = io::read_whitening(dir_ / "w.txt");
    EXPECT_TRUE(back.transform == w.transform);
    EXPECT_TRUE(back.mean == w.mean);
    EXPECT_TRUE(back.inverse_scale == w.inverse_scale);
}

TEST_F(IoTest, EdgeListIsOneBasedTabSeparated) {
    const GraphWeights g = GraphWeights::from_increments(3, {{0, 1}, {1, 0}, {2, 2}});
    io::write_edge_list(g, dir_ / "g.tsv");
    EXPECT_EQ(slurp(dir_ / "g.tsv"), "1\t2\t2\n3\t3\t1\n");
}

}  // namespace
}  // namespace gpfa
