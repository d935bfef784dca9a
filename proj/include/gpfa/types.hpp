#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "gpfa/error.hpp"

namespace gpfa {

// Rows are time-ordered samples, columns are signal dimensions.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A multivariate time series with optional column names (from a CSV header).
struct TimeSeries {
    Matrix values;
    std::vector<std::string> names;

    Index samples() const { return values.rows(); }
    Index dims() const { return values.cols(); }
};

/// Inclusive range of 0-based time indices.
struct IndexInterval {
    Index first = 0;
    Index last = -1;

    Index size() const { return last >= first ? last - first + 1 : 0; }
    bool contains(Index t) const { return t >= first && t <= last; }
};

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorKind::DegenerateInput, std::string(what) + " contains non-finite values");
    }
}

/// Flips the sign of a vector so that its largest-magnitude entry is positive.
/// Ties go to the first such entry.
template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>&& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    }
    if (v.size() > 0 && v(best) < 0) v = -v;
}

template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>& v) {
    fix_sign(std::move(v));
}

}  // namespace gpfa
