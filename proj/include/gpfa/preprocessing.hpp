#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpfa/types.hpp"

namespace gpfa {

/// Affine map to zero-mean, identity-covariance coordinates:
/// out = (x - mean) * transform, keeping output_dims() leading principal components.
struct WhiteningModel {
    Vector mean;
    Matrix transform;       // N x N'
    Vector inverse_scale;   // principal standard deviations of the retained components
    double variance_retained = 1.0;

    Index input_dims() const { return transform.rows(); }
    Index output_dims() const { return transform.cols(); }
};

struct WhiteningOptions {
    double variance_retained = 1.0;
    // Components with eigenvalue below relative_floor * largest are dropped.
    double relative_floor = 1e-12;
};

inline WhiteningModel whiten_fit(const Matrix& series, const WhiteningOptions& options = {}) {
    const Index samples = series.rows();
    const Index dims = series.cols();
    if (dims < 1) throw Error(ErrorKind::DimensionMismatch, "series has no columns");
    if (samples <= dims) {
        throw Error(ErrorKind::InsufficientSamples,
                    "whitening needs more samples than dimensions (S=" + std::to_string(samples) +
                        ", N=" + std::to_string(dims) + ")");
    }
    if (!(options.variance_retained > 0.0 && options.variance_retained <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "variance_retained must lie in (0, 1]");
    }
    require_finite(series, "series");

    WhiteningModel model;
    model.mean = series.colwise().mean().transpose();
    const Matrix centered = series.rowwise() - model.mean.transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(samples);
    cov = 0.5 * (cov + cov.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorKind::DegenerateInput, "covariance eigendecomposition failed");
    }
    // Eigen returns ascending order; walk from the top.
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double largest = values(dims - 1);
    if (!(largest > 0.0)) {
        throw Error(ErrorKind::DegenerateInput, "covariance has no positive eigenvalue");
    }
    const double floor = options.relative_floor * largest;
    const double total = std::accumulate(values.data(), values.data() + dims, 0.0,
                                         [](double acc, double v) { return acc + std::max(v, 0.0); });

    Index keep = 0;
    double cumulative = 0.0;
    for (Index i = dims - 1; i >= 0; --i) {
        if (values(i) < floor) break;
        cumulative += values(i);
        ++keep;
        if (cumulative >= options.variance_retained * total * (1.0 - 1e-12)) break;
    }
    if (keep == 0) throw Error(ErrorKind::DegenerateInput, "all eigenvalues below floor");

    model.transform.resize(dims, keep);
    model.inverse_scale.resize(keep);
    for (Index c = 0; c < keep; ++c) {
        Vector direction = eig.eigenvectors().col(dims - 1 - c);
        fix_sign(direction);
        const double sd = std::sqrt(values(dims - 1 - c));
        model.inverse_scale(c) = sd;
        model.transform.col(c) = direction / sd;
    }
    model.variance_retained = cumulative / total;
    return model;
}

inline WhiteningModel whiten_fit(const Matrix& series, double variance_retained) {
    return whiten_fit(series, WhiteningOptions{variance_retained});
}

inline Matrix whiten_apply(const WhiteningModel& model, const Matrix& series) {
    if (series.cols() != model.input_dims()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "series has " + std::to_string(series.cols()) + " columns, whitening expects " +
                        std::to_string(model.input_dims()));
    }
    return (series.rowwise() - model.mean.transpose()) * model.transform;
}

}  // namespace gpfa
