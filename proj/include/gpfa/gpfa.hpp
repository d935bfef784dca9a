#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "gpfa/embedding.hpp"
#include "gpfa/predictability.hpp"

namespace gpfa {

struct GpfaConfig {
    Index order = 1;         // p
    Index k = 10;
    Index output_dims = 2;   // M
    Index iterations = 50;   // R
    GraphVariant variant = GraphVariant::Star;
    bool include_past = true;
    bool normalized = true;
    std::optional<double> ridge;
    // Stop once the largest principal angle between successive subspaces drops below this.
    double convergence_tol = 0.0;
    unsigned jobs = 1;
};

struct IterationDiagnostics {
    Index iteration = 0;
    double objective = 0.0;          // graph objective of this iteration's graph at its solution
    double subspace_angle = std::numeric_limits<double>::quiet_NaN();  // vs. previous iterate
    double predictability = 0.0;     // training predictability of the features, q = k
};

struct GpfaResult {
    ProjectionModel model;
    std::vector<IterationDiagnostics> iterations;
};

/// Largest principal angle (radians) between the column spans of a and b.
inline double subspace_angle(const Matrix& a, const Matrix& b) {
    const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                               Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                               Eigen::MatrixXd::Identity(b.rows(), b.cols());
    // sine of the largest angle is the spectral norm of the part of qb outside span(qa)
    const Eigen::MatrixXd outside = qb - qa * (qa.transpose() * qb);
    const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(outside).singularValues()(0);
    return std::asin(std::min(1.0, s));
}

/// Neighborhood tables for one GPFA iteration, computed on the history embedding of `series`.
struct GpfaNeighborhoods {
    NeighborhoodTable future;
    std::optional<NeighborhoodTable> past;
};

inline GpfaNeighborhoods gpfa_neighborhoods(const Matrix& series, const GpfaConfig& config) {
    const HistoryEmbedding embedding = embed_history(series, config.order);
    GpfaNeighborhoods out{knn_sets(embedding, config.k, future_range(series.rows(), config.order), config.jobs),
                          std::nullopt};
    if (config.include_past) {
        out.past = knn_sets(embedding, config.k, past_range(series.rows(), config.order), config.jobs);
    }
    return out;
}

inline GraphWeights gpfa_graph(const GpfaNeighborhoods& hoods, Index samples, const GpfaConfig& config) {
    return build_graph(config.variant, hoods.future, hoods.past ? &*hoods.past : nullptr, samples);
}

/// Iterated GPFA on whitened training data (rows are samples). The first iteration uses
/// neighborhoods of the input histories; later ones use neighborhoods of the current features.
inline GpfaResult gpfa_train(const Matrix& x_white, const GpfaConfig& config) {
    const Index samples = x_white.rows();
    if (config.order < 1 || config.k < 1 || config.output_dims < 1 || config.iterations < 1) {
        throw Error(ErrorKind::InvalidArgument, "p, k, M and R must all be >= 1");
    }
    if (samples <= config.k + config.order + 1) {
        throw Error(ErrorKind::InsufficientSamples, "GPFA needs S > k + p + 1 samples");
    }
    if (config.output_dims > x_white.cols()) {
        throw Error(ErrorKind::RankError, "M exceeds the input dimension");
    }
    require_finite(x_white, "training series");

    const EmbeddingOptions embed_options{config.output_dims, config.normalized, config.ridge};
    GpfaResult result;
    GpfaNeighborhoods hoods = gpfa_neighborhoods(x_white, config);
    Matrix previous;
    EmbeddingSolution solution;

    for (Index r = 1; r <= config.iterations; ++r) {
        const GraphWeights graph = gpfa_graph(hoods, samples, config);
        solution = solve_embedding(x_white, graph, embed_options);
        const Matrix features = x_white * solution.extraction;

        IterationDiagnostics diag;
        diag.iteration = r;
        diag.objective = graph_objective(graph, features);
        if (r > 1) diag.subspace_angle = subspace_angle(previous, solution.extraction);

        hoods = gpfa_neighborhoods(features, config);
        diag.predictability = table_predictability(features, hoods.future).mean_trace;
        result.iterations.push_back(diag);
        previous = solution.extraction;

        if (r > 1 && diag.subspace_angle < config.convergence_tol) break;
    }

    ProjectionModel& model = result.model;
    model.algorithm = config.variant == GraphVariant::Clique ? Algorithm::Gpfa1 : Algorithm::Gpfa2;
    model.extraction = solution.extraction;
    model.eigenvalues = solution.eigenvalues;
    model.set_param("p", config.order);
    model.set_param("k", config.k);
    model.set_param("M", config.output_dims);
    model.set_param("R", config.iterations);
    model.set_param("iterations_run", result.iterations.size());
    model.set_param("include_past", config.include_past ? 1 : 0);
    model.set_param("normalized", config.normalized ? 1 : 0);
    model.set_param("ridge", solution.ridge);
    model.set_param("max_column_cosine", solution.max_column_cosine);
    return result;
}

}  // namespace gpfa
