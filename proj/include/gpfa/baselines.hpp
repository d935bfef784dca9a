#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cstdint>
#include <random>

#include "gpfa/model.hpp"

namespace gpfa {

namespace detail {

// Smallest-M eigenvectors of a symmetric matrix, unit length, sign fixed, ascending.
inline void smallest_eigenvectors(const Eigen::MatrixXd& sym, Index m, ProjectionModel& model) {
    const Index dims = sym.rows();
    if (m < 1 || m > dims) {
        throw Error(ErrorKind::RankError,
                    "cannot extract " + std::to_string(m) + " components from " + std::to_string(dims) + " dimensions");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (sym + sym.transpose()));
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::RankError, "eigensolver failed");
    model.extraction.resize(dims, m);
    for (Index c = 0; c < m; ++c) {
        Vector v = eig.eigenvectors().col(c).normalized();
        fix_sign(v);
        model.extraction.col(c) = v;
    }
    model.eigenvalues = eig.eigenvalues().head(m);
}

// Solves coef * gram = cross for coef, i.e. the least-squares map with ridge on gram.
inline Eigen::MatrixXd ridge_regression(const Eigen::MatrixXd& cross, Eigen::MatrixXd gram, double ridge) {
    gram.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::IllConditioned, "normal equations factorization failed");
    Eigen::MatrixXd coef = ldlt.solve(cross.transpose()).transpose();
    const double residual = (coef * gram - cross).norm();
    if (!coef.allFinite() || residual > 1e-6 * std::max(1.0, cross.norm())) {
        throw Error(ErrorKind::IllConditioned, "normal equations residual check failed");
    }
    return coef;
}

}  // namespace detail

/// Linear SFA on whitened input: directions of smallest mean squared one-step difference.
inline ProjectionModel sfa_train(const Matrix& x_white, Index output_dims) {
    if (x_white.rows() < 3) throw Error(ErrorKind::InsufficientSamples, "SFA needs at least 3 samples");
    const Matrix diff = x_white.bottomRows(x_white.rows() - 1) - x_white.topRows(x_white.rows() - 1);
    const Eigen::MatrixXd cov = (diff.transpose() * diff) / static_cast<double>(diff.rows());
    ProjectionModel model;
    model.algorithm = Algorithm::Sfa;
    detail::smallest_eigenvectors(cov, output_dims, model);
    model.set_param("M", output_dims);
    return model;
}

struct PfaConfig {
    Index order = 1;   // p
    Index K = 0;       // repeated-prediction iterations
    Index output_dims = 2;
    double ridge = 1e-9;
};

/// Stacked histories: row r holds zeta_t = (x_{t-1}, ..., x_{t-p}) for t = p + r (0-based).
inline Matrix pfa_histories(const Matrix& x, Index order) {
    const Index d = x.cols();
    const Index rows = x.rows() - order;
    Matrix z(rows, d * order);
    for (Index r = 0; r < rows; ++r) {
        const Index t = r + order;
        for (Index lag = 1; lag <= order; ++lag) z.row(r).segment((lag - 1) * d, d) = x.row(t - lag);
    }
    return z;
}

/// Autoregressive prediction-error PCA: smallest-variance directions of the summed
/// covariance of x_t - PredW V^i zeta_t for i = 0..K.
inline ProjectionModel pfa_train(const Matrix& x_white, const PfaConfig& config) {
    const Index d = x_white.cols();
    if (config.order < 1 || config.K < 0) throw Error(ErrorKind::InvalidArgument, "PFA needs p >= 1, K >= 0");
    if (x_white.rows() <= d * config.order + 1) {
        throw Error(ErrorKind::InsufficientSamples, "PFA needs S > N*p + 1 samples");
    }
    const Matrix z = pfa_histories(x_white, config.order);       // zeta_t for t = p..S-1
    const Matrix targets = x_white.bottomRows(z.rows());         // x_t for the same t
    const auto n = static_cast<double>(z.rows());

    const Eigen::MatrixXd gram = (z.transpose() * z) / n;
    const Eigen::MatrixXd pred_w = detail::ridge_regression((targets.transpose() * z) / n, gram, config.ridge);

    Eigen::MatrixXd residual_cov = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd propagated = z.transpose();  // V^i zeta_t as columns
    Eigen::MatrixXd v;
    if (config.K > 0) {
        const Matrix now = z.topRows(z.rows() - 1);
        const Matrix next = z.bottomRows(z.rows() - 1);
        const auto m = static_cast<double>(now.rows());
        v = detail::ridge_regression((next.transpose() * now) / m, (now.transpose() * now) / m, config.ridge);
    }
    for (Index i = 0; i <= config.K; ++i) {
        if (i > 0) propagated = v * propagated;
        const Eigen::MatrixXd r = targets.transpose() - pred_w * propagated;
        residual_cov += (r * r.transpose()) / n;
    }

    ProjectionModel model;
    model.algorithm = Algorithm::Pfa;
    detail::smallest_eigenvectors(residual_cov, config.output_dims, model);
    model.set_param("p", config.order);
    model.set_param("K", config.K);
    model.set_param("M", config.output_dims);
    return model;
}

/// First M columns of a seeded uniformly random orthogonal matrix.
inline ProjectionModel random_projection(Index input_dims, Index output_dims, std::uint64_t seed) {
    if (output_dims < 1 || output_dims > input_dims) {
        throw Error(ErrorKind::RankError, "random projection needs 1 <= M <= N'");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(input_dims, input_dims);
    for (Index j = 0; j < input_dims; ++j) {
        for (Index i = 0; i < input_dims; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(input_dims, input_dims);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < input_dims; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    ProjectionModel model;
    model.algorithm = Algorithm::Random;
    model.extraction = q.leftCols(output_dims);
    model.eigenvalues = Vector::Zero(output_dims);
    model.set_param("M", output_dims);
    model.set_param("seed", seed);
    return model;
}

}  // namespace gpfa
