#pragma once

#include <Eigen/SparseCore>

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

#include "gpfa/neighborhoods.hpp"

namespace gpfa {

enum class GraphVariant { Clique, Star };

inline const char* to_string(GraphVariant v) { return v == GraphVariant::Clique ? "clique" : "star"; }

/// One stored entry of the symmetric weight matrix, i <= j. The entry stands for both
/// W(i, j) and W(j, i).
struct Edge {
    Index i = 0;
    Index j = 0;
    std::int64_t weight = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Symmetric non-negative integer weight matrix W over `nodes()` samples, with degree
/// D_ii = sum_j W_ij and Laplacian L = D - W.
class GraphWeights {
public:
    GraphWeights() = default;

    /// Each key (i, j) adds one to W(i, j) and W(j, i) (once when i == j).
    static GraphWeights from_increments(Index nodes, std::vector<std::pair<Index, Index>> increments) {
        for (auto& [a, b] : increments) {
            if (a > b) std::swap(a, b);
        }
        std::sort(increments.begin(), increments.end());
        GraphWeights g;
        g.nodes_ = nodes;
        g.increments_ = static_cast<std::int64_t>(increments.size());
        for (const auto& [a, b] : increments) {
            if (!g.edges_.empty() && g.edges_.back().i == a && g.edges_.back().j == b) {
                ++g.edges_.back().weight;
            } else {
                g.edges_.push_back({a, b, 1});
            }
        }
        g.degrees_ = Vector::Zero(nodes);
        for (const Edge& e : g.edges_) {
            g.degrees_(e.i) += static_cast<double>(e.weight);
            if (e.i != e.j) g.degrees_(e.j) += static_cast<double>(e.weight);
        }
        return g;
    }

    Index nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Vector& degrees() const { return degrees_; }
    std::int64_t increment_count() const { return increments_; }

    std::int64_t weight(Index i, Index j) const {
        if (i > j) std::swap(i, j);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j, 0},
                                   [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
        return (it != edges_.end() && it->i == i && it->j == j) ? it->weight : 0;
    }

    /// Sum of W_ij over all ordered pairs (i, j).
    std::int64_t total_mass() const {
        std::int64_t m = 0;
        for (const Edge& e : edges_) m += e.i == e.j ? e.weight : 2 * e.weight;
        return m;
    }

    bool has_off_diagonal() const {
        return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.i != e.j; });
    }

    Eigen::SparseMatrix<double> to_sparse() const {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(edges_.size() * 2);
        for (const Edge& e : edges_) {
            trips.emplace_back(e.i, e.j, static_cast<double>(e.weight));
            if (e.i != e.j) trips.emplace_back(e.j, e.i, static_cast<double>(e.weight));
        }
        Eigen::SparseMatrix<double> w(nodes_, nodes_);
        w.setFromTriplets(trips.begin(), trips.end());
        return w;
    }

    /// L * X, computed edge by edge so the diagonal of W cancels exactly.
    Matrix laplacian_times(const Matrix& x) const {
        check_rows(x);
        Matrix out = Matrix::Zero(x.rows(), x.cols());
        for (const Edge& e : edges_) {
            if (e.i == e.j) continue;
            const auto w = static_cast<double>(e.weight);
            out.row(e.i) += w * (x.row(e.i) - x.row(e.j));
            out.row(e.j) += w * (x.row(e.j) - x.row(e.i));
        }
        return out;
    }

    Matrix degree_times(const Matrix& x) const {
        check_rows(x);
        return degrees_.asDiagonal() * x;
    }

private:
    void check_rows(const Matrix& x) const {
        if (x.rows() != nodes_) {
            throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(x.rows()) +
                                                          " rows, graph has " + std::to_string(nodes_) +
                                                          " nodes");
        }
    }

    Index nodes_ = 0;
    std::int64_t increments_ = 0;
    std::vector<Edge> edges_;
    Vector degrees_;
};

namespace detail {

inline Index checked_node(Index node, Index nodes) {
    if (node < 0 || node >= nodes) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "graph node " + std::to_string(node) + " outside [0, " + std::to_string(nodes) + ")");
    }
    return node;
}

// shift maps a neighborhood index onto its graph node: +1 for successors, -order for predecessors.
inline void add_edges(GraphVariant variant, const NeighborhoodTable& table, Index shift, Index nodes,
                      std::vector<std::pair<Index, Index>>& out) {
    const IndexInterval r = table.range();
    for (Index t = r.first; t <= r.last; ++t) {
        const auto& set = table.at(t);
        if (variant == GraphVariant::Clique) {
            for (std::size_t a = 0; a < set.size(); ++a) {
                const Index na = checked_node(set[a] + shift, nodes);
                out.emplace_back(na, na);
                for (std::size_t b = a + 1; b < set.size(); ++b) {
                    out.emplace_back(na, checked_node(set[b] + shift, nodes));
                }
            }
        } else {
            const Index center = checked_node(t + shift, nodes);
            for (Index i : set) {
                if (i == t) continue;
                out.emplace_back(checked_node(i + shift, nodes), center);
            }
        }
    }
}

}  // namespace detail

/// Future edges link successors (index + 1) of each neighborhood in `future`; past edges link
/// predecessors (index - order) of each neighborhood in `past`, when given.
inline GraphWeights build_graph(GraphVariant variant, const NeighborhoodTable& future,
                                const NeighborhoodTable* past, Index nodes) {
    std::vector<std::pair<Index, Index>> increments;
    detail::add_edges(variant, future, 1, nodes, increments);
    if (past != nullptr) detail::add_edges(variant, *past, -past->order, nodes, increments);
    return GraphWeights::from_increments(nodes, std::move(increments));
}

inline GraphWeights build_graph_clique(const NeighborhoodTable& future, Index nodes,
                                       const NeighborhoodTable* past = nullptr) {
    return build_graph(GraphVariant::Clique, future, past, nodes);
}

inline GraphWeights build_graph_star(const NeighborhoodTable& future, Index nodes,
                                     const NeighborhoodTable* past = nullptr) {
    return build_graph(GraphVariant::Star, future, past, nodes);
}

/// sum_{i,j} W_ij ||y_i - y_j||^2 over ordered pairs.
inline double graph_objective(const GraphWeights& graph, const Matrix& y) {
    if (y.rows() != graph.nodes()) {
        throw Error(ErrorKind::DimensionMismatch, "feature series length does not match graph size");
    }
    double total = 0.0;
    for (const Edge& e : graph.edges()) {
        if (e.i == e.j) continue;
        total += 2.0 * static_cast<double>(e.weight) * (y.row(e.i) - y.row(e.j)).squaredNorm();
    }
    return total;
}

}  // namespace gpfa
