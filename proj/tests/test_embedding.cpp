#include <gtest/gtest.h>

#include "gpfa/embedding.hpp"
#include "gpfa/gpfa.hpp"
#include "gpfa/preprocessing.hpp"
#include "oracles.hpp"

namespace gpfa {
namespace {

GraphWeights random_graph(Index nodes, Index edges, std::mt19937_64& rng) {
    std::uniform_int_distribution<Index> pick(0, nodes - 1);
    std::vector<std::pair<Index, Index>> inc;
    for (Index e = 0; e < edges; ++e) inc.emplace_back(pick(rng), pick(rng));
    return GraphWeights::from_increments(nodes, inc);
}

Matrix white(Index rows, Index cols, std::mt19937_64& rng) {
    const Matrix raw = oracle::random_matrix(rows, cols, rng);
    return whiten_apply(whiten_fit(raw), raw);
}

TEST(Embedding, EmptyGraphIsDegenerate) {
    std::mt19937_64 rng(1);
    const Matrix x = white(20, 3, rng);
    for (bool normalized : {true, false}) {
        try {
            solve_embedding(x, GraphWeights::from_increments(20, {}), {1, normalized, {}});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::DegenerateGraph);
        }
    }
}

TEST(Embedding, DiagonalPlainProblem) {
    // X^T L X = 1 * (x0 - x1)(x0 - x1)^T + 3 * (x0 - x2)(x0 - x2)^T = diag(1, 3)
    Matrix x(3, 2);
    x << 0, 0, 1, 0, 0, 1;
    std::vector<std::pair<Index, Index>> inc{{0, 1}, {0, 2}, {0, 2}, {0, 2}};
    const GraphWeights g = GraphWeights::from_increments(3, inc);
    EXPECT_TRUE(projected_laplacian(x, g).isApprox(Eigen::Matrix2d(Eigen::Vector2d(1, 3).asDiagonal())));
    const EmbeddingSolution s = solve_embedding(x, g, {1, false, {}});
    EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s.extraction(0, 0)), 1.0, 1e-12);
    EXPECT_NEAR(s.extraction(1, 0), 0.0, 1e-12);
}

TEST(Embedding, MatchesDenseGeneralizedOracle) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = white(200, 5, rng);
        const GraphWeights g = random_graph(200, 600, rng);
        const EmbeddingSolution s = solve_embedding(x, g, {3, true, {}});
        Eigen::MatrixXd rhs = projected_degree(x, g);
        rhs.diagonal().array() += s.ridge;
        const auto ref = oracle::generalized_smallest(projected_laplacian(x, g), rhs, 3);
        for (Index j = 0; j < 3; ++j) {
            EXPECT_NEAR(s.eigenvalues(j), ref.values(j), 1e-8);
            EXPECT_LE(oracle::principal_angle(s.extraction.col(j), ref.vectors.col(j)), 1e-6);
        }
    }
}

TEST(Embedding, SolutionInvariants) {
    std::mt19937_64 rng(3);
    const Matrix x = white(150, 6, rng);
    const GraphWeights g = random_graph(150, 500, rng);
    for (bool normalized : {true, false}) {
        const EmbeddingSolution s = solve_embedding(x, g, {4, normalized, {}});
        const Eigen::MatrixXd lhs = projected_laplacian(x, g);
        Eigen::MatrixXd rhs = normalized ? projected_degree(x, g) : Eigen::MatrixXd::Identity(6, 6);
        if (normalized) rhs.diagonal().array() += s.ridge;
        for (Index j = 0; j < 4; ++j) {
            const Eigen::VectorXd a = s.extraction.col(j);
            EXPECT_NEAR(a.norm(), 1.0, 1e-12);
            if (j > 0) EXPECT_LE(s.eigenvalues(j - 1), s.eigenvalues(j));
            const Eigen::VectorXd la = lhs * a;
            EXPECT_LE((la - s.eigenvalues(j) * rhs * a).norm(), 1e-6 * la.norm());
            Index big = 0;
            a.cwiseAbs().maxCoeff(&big);
            EXPECT_GT(a(big), 0.0);
        }
    }
}

TEST(Embedding, PlainSolutionIsOptimal) {
    std::mt19937_64 rng(4);
    const Matrix x = white(120, 5, rng);
    const GraphWeights g = random_graph(120, 400, rng);
    const EmbeddingSolution s = solve_embedding(x, g, {2, false, {}});
    const Eigen::MatrixXd lhs = projected_laplacian(x, g);
    const Eigen::VectorXd a1 = s.extraction.col(0);
    const double best = a1.dot(lhs * a1);
    const Matrix dirs = oracle::random_matrix(10000, 5, rng);
    for (Index i = 0; i < dirs.rows(); ++i) {
        const Eigen::VectorXd v = dirs.row(i).transpose().normalized();
        ASSERT_LE(best, v.dot(lhs * v) + 1e-12);
    }
    const double objective = graph_objective(g, x * s.extraction);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::MatrixXd q = oracle::random_orthogonal(5, rng).leftCols(2);
        EXPECT_LE(objective, graph_objective(g, x * q) + 1e-9);
    }
}

TEST(Embedding, Errors) {
    std::mt19937_64 rng(5);
    const Matrix x = white(40, 3, rng);
    const GraphWeights g = random_graph(40, 100, rng);
    try {
        solve_embedding(x, g, {4, true, {}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankError);
    }
    // only nodes 0 and 1 carry degree and they agree on column 1, so X D X^T is singular
    Matrix y = x;
    y(0, 1) = 0;
    y(1, 1) = 0;
    const GraphWeights pair = GraphWeights::from_increments(40, {{0, 1}});
    try {
        solve_embedding(y, pair, {1, true, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularRHS);
    }
}

}  // namespace
}  // namespace gpfa
