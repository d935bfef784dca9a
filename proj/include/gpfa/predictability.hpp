#pragma once

#include <vector>

#include "gpfa/neighborhoods.hpp"

namespace gpfa {

struct PredictabilityReport {
    double mean_trace = 0.0;
    std::vector<double> per_t;
    Index q = 0;
    Index order = 1;
    Index samples = 0;
};

/// Trace of the (1/n) sample covariance of the rows of y listed in `rows`, each shifted by `shift`.
inline double successor_covariance_trace(const Matrix& y, const std::vector<Index>& rows, Index shift = 1) {
    const auto n = static_cast<double>(rows.size());
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(y.cols());
    for (Index i : rows) mean += y.row(i + shift);
    mean /= n;
    double acc = 0.0;
    for (Index i : rows) acc += (y.row(i + shift) - mean).squaredNorm();
    return acc / n;
}

/// Mean over t of the successor covariance traces of a neighborhood table built on y.
inline PredictabilityReport table_predictability(const Matrix& y, const NeighborhoodTable& table,
                                                 bool keep_per_t = false) {
    PredictabilityReport report;
    report.q = table.k;
    report.order = table.order;
    report.samples = y.rows();
    const IndexInterval r = table.range();
    double sum = 0.0;
    if (keep_per_t) report.per_t.reserve(static_cast<std::size_t>(r.size()));
    for (Index t = r.first; t <= r.last; ++t) {
        const double tr = successor_covariance_trace(y, table.at(t));
        sum += tr;
        if (keep_per_t) report.per_t.push_back(tr);
    }
    report.mean_trace = sum / static_cast<double>(r.size());
    return report;
}

/// Times whose successor exists: 0-based [order - 1, S - 2].
inline IndexInterval future_range(Index samples, Index order) { return {order - 1, samples - 2}; }

/// Times whose order-step predecessor exists: 0-based [order, S - 1].
inline IndexInterval past_range(Index samples, Index order) { return {order, samples - 1}; }

/// kNN estimate of the expected next-step conditional covariance trace of y given its
/// `order`-step history, using q neighbors. Smaller means more predictable.
inline PredictabilityReport evaluate_predictability(const Matrix& y, Index order, Index q,
                                                    bool keep_per_t = false, unsigned jobs = 1) {
    if (order < 1 || q < 1) throw Error(ErrorKind::InvalidArgument, "order and q must be >= 1");
    if (y.rows() < q + order + 1) {
        throw Error(ErrorKind::NotEnoughSamples, "predictability with q=" + std::to_string(q) +
                                                     " and p=" + std::to_string(order) + " needs at least " +
                                                     std::to_string(q + order + 1) + " samples, got " +
                                                     std::to_string(y.rows()));
    }
    const HistoryEmbedding embedding = embed_history(y, order);
    const NeighborhoodTable table = knn_sets(embedding, q, future_range(y.rows(), order), jobs);
    return table_predictability(y, table, keep_per_t);
}

}  // namespace gpfa
