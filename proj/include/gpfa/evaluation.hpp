#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gpfa/baselines.hpp"
#include "gpfa/gpfa.hpp"
#include "gpfa/predictability.hpp"
#include "gpfa/preprocessing.hpp"

namespace gpfa {

/// Predictable-noise toy data: column 0 is i.i.d. N(0,1) noise xi_t, column 1 is xi_{t-1},
/// remaining columns are independent N(0,1) nuisance noise.
inline Matrix generate_toy(Index samples, Index dims, std::uint64_t seed) {
    if (dims < 2 || samples < 2) throw Error(ErrorKind::InvalidArgument, "toy data needs N >= 2 and S >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix out(samples, dims);
    double previous = normal(rng);
    for (Index t = 0; t < samples; ++t) {
        const double xi = normal(rng);
        out(t, 0) = xi;
        out(t, 1) = previous;
        previous = xi;
        for (Index c = 2; c < dims; ++c) out(t, c) = normal(rng);
    }
    return out;
}

/// Everything needed to reproduce one cell of a benchmark table.
struct ExperimentParams {
    Algorithm algorithm = Algorithm::Gpfa2;
    Index order = 1;          // p, shared by training and evaluation
    Index k = 10;
    Index q = 10;
    Index output_dims = 2;    // M
    Index iterations = 50;    // R
    Index pfa_K = 0;
    bool include_past = true;
    bool normalized = true;
    double convergence_tol = 0.0;
    std::optional<double> ridge;
    Index train_samples = 700;
    Index test_samples = 100;
    Index dims = 10;          // N (toy data only; user series fix it)
    double variance_retained = 1.0;
};

inline GpfaConfig gpfa_config(const ExperimentParams& params) {
    GpfaConfig c;
    c.order = params.order;
    c.k = params.k;
    c.output_dims = params.output_dims;
    c.iterations = params.iterations;
    c.variant = params.algorithm == Algorithm::Gpfa1 ? GraphVariant::Clique : GraphVariant::Star;
    c.include_past = params.include_past;
    c.normalized = params.normalized;
    c.convergence_tol = params.convergence_tol;
    c.ridge = params.ridge;
    return c;
}

inline PfaConfig pfa_config(const ExperimentParams& params) {
    return PfaConfig{params.order, params.pfa_K, params.output_dims};
}

/// Trains the requested algorithm on whitened data. `seed` only matters for the random baseline.
inline ProjectionModel fit_model(const Matrix& x_white, const ExperimentParams& params, std::uint64_t seed) {
    switch (params.algorithm) {
        case Algorithm::Gpfa1:
        case Algorithm::Gpfa2:
            return gpfa_train(x_white, gpfa_config(params)).model;
        case Algorithm::Sfa:
            return sfa_train(x_white, params.output_dims);
        case Algorithm::Pfa:
            return pfa_train(x_white, pfa_config(params));
        case Algorithm::Random:
            return random_projection(x_white.cols(), params.output_dims, seed);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown algorithm");
}

/// Where repetition data comes from: the toy generator or contiguous blocks of a user series.
struct DatasetSource {
    std::shared_ptr<const Matrix> series;  // null selects the toy generator

    bool is_toy() const { return series == nullptr; }
    Index dims(const ExperimentParams& params) const { return is_toy() ? params.dims : series->cols(); }
};

struct TrainTestSplit {
    Matrix train;
    Matrix test;
};

/// Disjoint successive train and test blocks. For user series the train block starts at a
/// seeded uniformly random offset and the test block follows it.
inline TrainTestSplit make_split(const DatasetSource& source, const ExperimentParams& params, std::uint64_t seed) {
    const Index total = params.train_samples + params.test_samples;
    Matrix data;
    if (source.is_toy()) {
        data = generate_toy(total, params.dims, seed);
    } else {
        const Matrix& s = *source.series;
        if (s.rows() < total) {
            throw Error(ErrorKind::InsufficientSamples, "series has " + std::to_string(s.rows()) +
                                                            " rows, split needs " + std::to_string(total));
        }
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<Index> start(0, s.rows() - total);
        data = s.middleRows(start(rng), total);
    }
    return {data.topRows(params.train_samples), data.bottomRows(params.test_samples)};
}

/// One repetition: whiten on train, fit, project whitened test data, evaluate.
inline double run_repetition(const DatasetSource& source, const ExperimentParams& params, std::uint64_t seed) {
    const TrainTestSplit split = make_split(source, params, seed);
    const WhiteningModel whitening = whiten_fit(split.train, params.variance_retained);
    const Matrix train = whiten_apply(whitening, split.train);
    const ProjectionModel model = fit_model(train, params, seed);
    const Matrix features = project(model, whiten_apply(whitening, split.test));
    return evaluate_predictability(features, params.order, params.q).mean_trace;
}

struct ExperimentStats {
    ExperimentParams params;
    std::string label;  // overrides the algorithm column when set
    std::uint64_t base_seed = 0;
    Index runs = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single run
    double wall_time_seconds = 0.0;
    std::vector<double> values;  // per repetition, in repetition order
};

inline void summarize(ExperimentStats& stats) {
    const auto n = static_cast<double>(stats.values.size());
    double sum = 0.0;
    for (double v : stats.values) sum += v;
    stats.mean = sum / n;
    double sq = 0.0;
    for (double v : stats.values) sq += (v - stats.mean) * (v - stats.mean);
    stats.stddev = stats.values.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
}

/// Repetition r uses seed base_seed + r. Repetitions run on `jobs` threads; the aggregate
/// does not depend on scheduling. The first failing repetition aborts the experiment.
inline ExperimentStats run_experiment(const DatasetSource& source, const ExperimentParams& params,
                                      Index repetitions, std::uint64_t base_seed, unsigned jobs = 1) {
    if (repetitions < 1) throw Error(ErrorKind::InvalidArgument, "repetitions must be >= 1");
    const auto started = std::chrono::steady_clock::now();
    ExperimentStats stats;
    stats.params = params;
    stats.params.dims = source.dims(params);
    stats.base_seed = base_seed;
    stats.runs = repetitions;
    stats.values.assign(static_cast<std::size_t>(repetitions), 0.0);

    std::atomic<Index> next{0};
    std::mutex failure_lock;
    std::exception_ptr failure;
    Index failed_at = repetitions;

    auto worker = [&] {
        for (Index r = next++; r < repetitions; r = next++) {
            try {
                stats.values[static_cast<std::size_t>(r)] =
                    run_repetition(source, params, base_seed + static_cast<std::uint64_t>(r));
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (r < failed_at) {
                    failed_at = r;
                    failure = std::current_exception();
                }
                next = repetitions;
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(repetitions)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failure) {
        const std::string context = std::string(to_string(params.algorithm)) + " repetition " +
                                    std::to_string(failed_at) + " (seed " +
                                    std::to_string(base_seed + static_cast<std::uint64_t>(failed_at)) + "): ";
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw Error(e.kind(), context + e.what());
        }
    }
    summarize(stats);
    stats.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return stats;
}

}  // namespace gpfa
