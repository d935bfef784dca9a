#pragma once

#include <algorithm>
#include <thread>
#include <utility>
#include <vector>

#include "gpfa/types.hpp"

namespace gpfa {

/// Time-delay embedding. Row r holds the history ending at time t = r + order - 1,
/// i.e. the concatenation (x_t, x_{t-1}, ..., x_{t-order+1}).
struct HistoryEmbedding {
    Matrix vectors;
    Index order = 1;
    Index step_dims = 0;

    Index first_time() const { return order - 1; }
    Index last_time() const { return order - 1 + vectors.rows() - 1; }
    auto row_at(Index t) const { return vectors.row(t - first_time()); }
};

inline HistoryEmbedding embed_history(const Matrix& series, Index order) {
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "history order must be >= 1");
    if (order >= series.rows()) {
        throw Error(ErrorKind::OrderTooLarge, "history order " + std::to_string(order) +
                                                  " needs more than " + std::to_string(series.rows()) +
                                                  " samples");
    }
    const Index d = series.cols();
    const Index rows = series.rows() - order + 1;
    HistoryEmbedding out;
    out.order = order;
    out.step_dims = d;
    out.vectors.resize(rows, d * order);
    for (Index r = 0; r < rows; ++r) {
        const Index t = r + order - 1;
        for (Index lag = 0; lag < order; ++lag) {
            out.vectors.row(r).segment(lag * d, d) = series.row(t - lag);
        }
    }
    return out;
}

/// For each time t in range(), the sorted indices of its k nearest histories plus t itself.
struct NeighborhoodTable {
    Index first = 0;
    Index k = 0;
    Index order = 1;
    std::vector<std::vector<Index>> sets;

    IndexInterval range() const { return {first, first + static_cast<Index>(sets.size()) - 1}; }
    const std::vector<Index>& at(Index t) const { return sets.at(static_cast<std::size_t>(t - first)); }
};

namespace detail {

inline double squared_distance(const double* a, const double* b, Index n) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

inline std::vector<Index> nearest_of(const HistoryEmbedding& embedding, Index k, IndexInterval range,
                                     Index query, std::vector<std::pair<double, Index>>& best) {
    const Index width = embedding.vectors.cols();
    const double* q = embedding.vectors.data() + (query - embedding.first_time()) * width;
    // best holds the k smallest (distance, index) pairs seen so far, sorted; pair ordering
    // breaks distance ties by the smaller time index
    best.clear();
    for (Index c = range.first; c <= range.last; ++c) {
        if (c == query) continue;
        const double* v = embedding.vectors.data() + (c - embedding.first_time()) * width;
        const std::pair<double, Index> cand{squared_distance(q, v, width), c};
        if (static_cast<Index>(best.size()) < k) {
            best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
        } else if (cand < best.back()) {
            best.pop_back();
            best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
        }
    }
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(k + 1));
    out.push_back(query);
    for (const auto& b : best) out.push_back(b.second);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Exact k-nearest-neighbor sets (Euclidean). Both queries and candidates are restricted to
/// `range`. `jobs` > 1 splits queries across threads; results do not depend on it.
inline NeighborhoodTable knn_sets(const HistoryEmbedding& embedding, Index k, IndexInterval range,
                                  unsigned jobs = 1) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    if (range.first < embedding.first_time() || range.last > embedding.last_time() || range.size() < 1) {
        throw Error(ErrorKind::IndexOutOfRange, "neighborhood range [" + std::to_string(range.first) + ", " +
                                                    std::to_string(range.last) +
                                                    "] outside the embedded histories");
    }
    if (range.size() - 1 < k) {
        throw Error(ErrorKind::NotEnoughCandidates, "need " + std::to_string(k) + " neighbors but only " +
                                                        std::to_string(range.size() - 1) +
                                                        " candidates exist");
    }

    NeighborhoodTable table;
    table.first = range.first;
    table.k = k;
    table.order = embedding.order;
    table.sets.resize(static_cast<std::size_t>(range.size()));

    auto work = [&](Index begin, Index end) {
        std::vector<std::pair<double, Index>> scratch;
        scratch.reserve(static_cast<std::size_t>(k + 1));
        for (Index t = begin; t < end; ++t) {
            table.sets[static_cast<std::size_t>(t - range.first)] =
                detail::nearest_of(embedding, k, range, t, scratch);
        }
    };

    const Index n = range.size();
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (jobs == 1) {
        work(range.first, range.last + 1);
    } else {
        std::vector<std::jthread> pool;
        const Index chunk = (n + jobs - 1) / jobs;
        for (Index begin = range.first; begin <= range.last; begin += chunk) {
            pool.emplace_back(work, begin, std::min(begin + chunk, range.last + 1));
        }
    }
    return table;
}

}  // namespace gpfa
