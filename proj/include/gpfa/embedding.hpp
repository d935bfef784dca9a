#pragma once

#include <Eigen/Eigenvalues>

#include <optional>

#include "gpfa/graph.hpp"
#include "gpfa/model.hpp"

namespace gpfa {

struct EmbeddingOptions {
    Index output_dims = 1;
    // Generalized problem X L X^T a = lambda X D X^T a when set, plain X L X^T a = lambda a otherwise.
    bool normalized = true;
    // Added to X D X^T. Unset means 1e-9 * trace(X D X^T) / N'.
    std::optional<double> ridge;
};

struct EmbeddingSolution {
    Matrix extraction;     // N' x M, unit columns
    Vector eigenvalues;    // ascending
    double ridge = 0.0;
    double max_column_cosine = 0.0;
};

/// Projected Laplacian X^T L X for a sample-per-row matrix X.
inline Eigen::MatrixXd projected_laplacian(const Matrix& x, const GraphWeights& graph) {
    Eigen::MatrixXd m = x.transpose() * graph.laplacian_times(x);
    return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd projected_degree(const Matrix& x, const GraphWeights& graph) {
    Eigen::MatrixXd m = x.transpose() * graph.degree_times(x);
    return 0.5 * (m + m.transpose());
}

/// Smallest-eigenvalue solutions of the graph embedding problem, each normalized to unit
/// length with its largest-magnitude entry positive.
inline EmbeddingSolution solve_embedding(const Matrix& x, const GraphWeights& graph,
                                         const EmbeddingOptions& options) {
    const Index dims = x.cols();
    if (x.rows() != graph.nodes()) {
        throw Error(ErrorKind::DimensionMismatch, "training matrix rows do not match graph nodes");
    }
    if (options.output_dims < 1 || options.output_dims > dims) {
        throw Error(ErrorKind::RankError, "cannot extract " + std::to_string(options.output_dims) +
                                              " components from " + std::to_string(dims) + " dimensions");
    }
    if (!graph.has_off_diagonal()) {
        throw Error(ErrorKind::DegenerateGraph, "graph has no edges between distinct samples");
    }

    const Eigen::MatrixXd lhs = projected_laplacian(x, graph);
    EmbeddingSolution out;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;

    if (options.normalized) {
        Eigen::MatrixXd rhs = projected_degree(x, graph);
        out.ridge = options.ridge.value_or(1e-9 * rhs.trace() / static_cast<double>(dims));
        if (out.ridge < 0.0) throw Error(ErrorKind::InvalidArgument, "ridge must be non-negative");
        rhs.diagonal().array() += out.ridge;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rhs_spectrum(rhs, Eigen::EigenvaluesOnly);
        const double lo = rhs_spectrum.eigenvalues()(0);
        const double hi = rhs_spectrum.eigenvalues()(dims - 1);
        if (!(hi > 0.0) || lo < 1e-12 * hi) {
            throw Error(ErrorKind::SingularRHS, "X D X^T + ridge*I is numerically singular; raise the ridge");
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(lhs, rhs,
                                                                         Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorKind::SingularRHS, "generalized eigensolver failed");
        }
        vectors = solver.eigenvectors();
        values = solver.eigenvalues();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lhs);
        if (solver.info() != Eigen::Success) throw Error(ErrorKind::RankError, "eigensolver failed");
        vectors = solver.eigenvectors();
        values = solver.eigenvalues();
    }

    out.extraction.resize(dims, options.output_dims);
    out.eigenvalues = values.head(options.output_dims);
    for (Index c = 0; c < options.output_dims; ++c) {
        Vector v = vectors.col(c).normalized();
        fix_sign(v);
        out.extraction.col(c) = v;
    }
    out.max_column_cosine = max_column_cosine(out.extraction);
    return out;
}

}  // namespace gpfa
