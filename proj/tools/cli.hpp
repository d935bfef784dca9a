#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gpfa/gpfa_all.hpp"

namespace gpfa::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// Settings shared by every subcommand. Option long names double as config-file keys.
struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string model;
    std::string algorithm = "gpfa2";
    std::vector<std::string> algorithms{"gpfa1", "gpfa2", "sfa", "pfa", "random"};
    ExperimentParams params;
    Index repetitions = 50;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    bool overwrite = false;
    std::string sweep_axis;
    std::vector<std::string> sweep_values;
    std::string dump_graph;
    std::string diagnostics;
};

inline Algorithm algorithm_or_throw(const std::string& tag) {
    const auto a = parse_algorithm(tag);
    if (!a) throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + tag + "'");
    return *a;
}

/// Drops blank entries and surrounding whitespace from a list option.
inline std::vector<std::string> clean_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
    }
    return out;
}

/// Sets one sweepable parameter. Axis names follow the report columns.
inline void apply_axis(ExperimentParams& params, const std::string& axis, double value) {
    const auto v = static_cast<Index>(value);
    if (static_cast<double>(v) != value || v < 1) {
        throw Error(ErrorKind::InvalidArgument, "sweep value " + std::to_string(value) + " is not a positive integer");
    }
    if (axis == "p") params.order = v;
    else if (axis == "k") params.k = v;
    else if (axis == "q") params.q = v;
    else if (axis == "M") params.output_dims = v;
    else if (axis == "R") params.iterations = v;
    else if (axis == "S_train") params.train_samples = v;
    else if (axis == "N") params.dims = v;
    else throw Error(ErrorKind::InvalidArgument, "unknown sweep axis '" + axis + "' (p|k|q|M|R|S_train|N)");
}

namespace detail {

inline void refuse_existing(const std::filesystem::path& path, bool overwrite) {
    if (!overwrite && std::filesystem::exists(path)) {
        throw Error(ErrorKind::FileExists, path.string() + " exists; pass --overwrite to replace it");
    }
}

inline void require(const std::string& value, const char* flag) {
    if (value.empty()) throw Error(ErrorKind::InvalidArgument, std::string(flag) + " is required");
}

inline std::filesystem::path whitening_path(const std::filesystem::path& model) {
    return model.string() + ".whitening";
}

inline void emit_report(const std::vector<ExperimentStats>& rows, const RunConfig& config, std::ostream& out) {
    if (config.output.empty()) {
        out << io::report_header << '\n';
        for (const auto& r : rows) out << io::report_row(r) << '\n';
    } else {
        io::write_report(rows, config.output, !config.overwrite);
    }
}

}  // namespace detail

/// Writes <output>/train.csv and <output>/test.csv from the toy generator; the test block
/// directly follows the training block in one generated sequence.
inline void cmd_generate(const RunConfig& config) {
    detail::require(config.output, "--output");
    const std::filesystem::path dir = config.output;
    std::filesystem::create_directories(dir);
    const auto train_path = dir / "train.csv";
    const auto test_path = dir / "test.csv";
    detail::refuse_existing(train_path, config.overwrite);
    detail::refuse_existing(test_path, config.overwrite);
    const TrainTestSplit split = make_split(DatasetSource{}, config.params, config.seed);
    io::write_series(split.train, train_path);
    io::write_series(split.test, test_path);
}

/// Whitens the input, trains, and writes the model plus <model>.whitening.
inline void cmd_train(const RunConfig& config) {
    detail::require(config.input, "--input");
    detail::require(config.output, "--output");
    const std::filesystem::path model_path = config.output;
    detail::refuse_existing(model_path, config.overwrite);
    detail::refuse_existing(detail::whitening_path(model_path), config.overwrite);

    ExperimentParams params = config.params;
    params.algorithm = algorithm_or_throw(config.algorithm);
    const TimeSeries raw = io::read_series(config.input);
    const WhiteningModel whitening = whiten_fit(raw.values, params.variance_retained);
    const Matrix x = whiten_apply(whitening, raw.values);

    ProjectionModel model;
    if (params.algorithm == Algorithm::Gpfa1 || params.algorithm == Algorithm::Gpfa2) {
        const GpfaConfig gc = [&] {
            GpfaConfig c = gpfa_config(params);
            c.jobs = config.jobs;
            return c;
        }();
        GpfaResult result = gpfa_train(x, gc);
        model = std::move(result.model);
        if (!config.diagnostics.empty()) {
            std::ofstream diag(config.diagnostics);
            if (!diag) throw Error(ErrorKind::Io, "cannot write " + config.diagnostics);
            diag << "iteration,objective,subspace_angle,predictability\n";
            for (const auto& d : result.iterations) {
                diag << d.iteration << ',' << io::format_double(d.objective) << ','
                     << (std::isnan(d.subspace_angle) ? std::string() : io::format_double(d.subspace_angle)) << ','
                     << io::format_double(d.predictability) << '\n';
            }
        }
        if (!config.dump_graph.empty()) {
            // graph of the final iteration: neighborhoods of the features the model was trained from
            const Matrix features = x * model.extraction;
            const GpfaNeighborhoods hoods =
                gpfa_neighborhoods(result.iterations.size() > 1 ? features : x, gc);
            io::write_edge_list(gpfa_graph(hoods, x.rows(), gc), config.dump_graph);
        }
    } else {
        model = fit_model(x, params, config.seed);
    }
    model.set_param("variance_retained", whitening.variance_retained);
    io::write_model(model, model_path);
    io::write_whitening(whitening, detail::whitening_path(model_path));
}

/// Applies the stored whitening and projection to a raw series.
inline Matrix load_and_project(const std::string& model_path, const Matrix& raw) {
    const ProjectionModel model = io::read_model(model_path);
    const WhiteningModel whitening = io::read_whitening(detail::whitening_path(model_path));
    return project(model, whiten_apply(whitening, raw));
}

inline void cmd_project(const RunConfig& config) {
    detail::require(config.model, "--model");
    detail::require(config.input, "--input");
    detail::require(config.output, "--output");
    detail::refuse_existing(config.output, config.overwrite);
    const TimeSeries raw = io::read_series(config.input);
    io::write_series(load_and_project(config.model, raw.values), config.output);
}

/// Evaluates predictability of --input, projected through --model first when one is given.
inline ExperimentStats cmd_evaluate(const RunConfig& config, std::ostream& out) {
    detail::require(config.input, "--input");
    const TimeSeries raw = io::read_series(config.input);
    ExperimentStats stats;
    stats.params = config.params;
    stats.params.train_samples = 0;
    stats.params.test_samples = raw.samples();
    stats.params.dims = raw.dims();
    Matrix features = raw.values;
    if (!config.model.empty()) {
        const ProjectionModel model = io::read_model(config.model);
        stats.params.algorithm = model.algorithm;
        stats.params.output_dims = model.output_dims();
        const auto take = [&](const char* key, Index& field) {
            if (auto it = model.params.find(key); it != model.params.end()) field = std::stoll(it->second);
        };
        take("k", stats.params.k);
        take("R", stats.params.iterations);
        take("K", stats.params.pfa_K);
        features = load_and_project(config.model, raw.values);
    } else {
        stats.label = "identity";
        stats.params.output_dims = raw.dims();
    }
    const auto started = std::chrono::steady_clock::now();
    stats.values = {evaluate_predictability(features, stats.params.order, stats.params.q, false, config.jobs).mean_trace};
    stats.runs = 1;
    stats.base_seed = config.seed;
    summarize(stats);
    stats.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    detail::emit_report({stats}, config, out);
    return stats;
}

/// One report row per (algorithm, sweep value), in the order given.
inline std::vector<ExperimentStats> cmd_benchmark(const RunConfig& config, std::ostream& out) {
    DatasetSource source;
    if (!config.input.empty()) {
        source.series = std::make_shared<const Matrix>(io::read_series(config.input).values);
    }
    std::vector<Algorithm> algorithms;
    for (const auto& tag : clean_list(config.algorithms)) algorithms.push_back(algorithm_or_throw(tag));

    std::vector<std::optional<double>> points;
    if (config.sweep_axis.empty()) {
        points.push_back(std::nullopt);
    } else {
        for (const auto& v : clean_list(config.sweep_values)) {
            try {
                points.emplace_back(std::stod(v));
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidArgument, "bad sweep value '" + v + "'");
            }
        }
    }

    std::vector<ExperimentStats> rows;
    for (Algorithm a : algorithms) {
        for (const auto& point : points) {
            ExperimentParams params = config.params;
            params.algorithm = a;
            if (point) apply_axis(params, config.sweep_axis, *point);
            rows.push_back(run_experiment(source, params, config.repetitions, config.seed, config.jobs));
        }
    }
    detail::emit_report(rows, config, out);
    return rows;
}

/// Parses arguments (and an optional key=value config file) and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Graph-based predictable feature analysis: generate, train, project, evaluate, benchmark"};
    app.set_config("--config", "", "key=value configuration file; flags override its values");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    RunConfig config;
    ExperimentParams& p = config.params;
    app.add_option("--seed", config.seed, "Base random seed")->capture_default_str();
    app.add_option("--jobs", config.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_flag("--overwrite", config.overwrite, "Replace existing output files (benchmark/evaluate: truncate)");
    app.add_option("--output", config.output, "Output path (directory for generate)");
    app.add_option("--input", config.input, "Input CSV series");
    app.add_option("--model", config.model, "Model file written by train");
    app.add_option("--algorithm", config.algorithm, "gpfa1 | gpfa2 | sfa | pfa | random")->capture_default_str();
    app.add_option("--algorithms", config.algorithms, "Comma-separated list for benchmark")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--p", p.order, "History order")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--k", p.k, "Training neighbors")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--q", p.q, "Evaluation neighbors")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--M", p.output_dims, "Output dimensions")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--R", p.iterations, "GPFA iterations")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--K", p.pfa_K, "PFA repeated predictions")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--include-past", p.include_past, "GPFA past-variance edges")->capture_default_str();
    app.add_option("--normalized", p.normalized, "Normalized (generalized) embedding")->capture_default_str();
    app.add_option("--ridge", p.ridge, "Ridge on X D X^T (default relative 1e-9)");
    app.add_option("--convergence-tol", p.convergence_tol, "Stop GPFA when the subspace angle drops below this")
        ->capture_default_str();
    app.add_option("--variance-retained", p.variance_retained, "PCA variance kept when whitening")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--s-train", p.train_samples, "Training samples")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--s-test", p.test_samples, "Test samples")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--n", p.dims, "Toy input dimensions")->capture_default_str()->check(CLI::Range(2, 1 << 20));
    app.add_option("--repetitions", config.repetitions, "Repetitions per benchmark cell")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--sweep-axis", config.sweep_axis, "p | k | q | M | R | S_train | N");
    app.add_option("--sweep-values", config.sweep_values, "Comma-separated sweep values")->delimiter(',');
    app.add_option("--dump-graph", config.dump_graph, "train: write the final GPFA graph as an edge list");
    app.add_option("--diagnostics", config.diagnostics, "train: write per-iteration GPFA diagnostics CSV");

    for (const char* name : {"generate", "train", "project", "evaluate", "benchmark"}) {
        app.add_subcommand(name)->fallthrough();
    }
    app.get_subcommand("generate")->description("Write toy train/test CSVs");
    app.get_subcommand("train")->description("Fit a model on a CSV series");
    app.get_subcommand("project")->description("Extract features from a CSV series");
    app.get_subcommand("evaluate")->description("Report predictability of a series");
    app.get_subcommand("benchmark")->description("Repeated experiments over a parameter sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }
    config.command = app.get_subcommands().front()->get_name();

    try {
        if (config.command == "generate") cmd_generate(config);
        else if (config.command == "train") cmd_train(config);
        else if (config.command == "project") cmd_project(config);
        else if (config.command == "evaluate") cmd_evaluate(config, out);
        else cmd_benchmark(config, out);
    } catch (const Error& e) {
        err << "gpfa " << config.command << ": " << e.what() << '\n';
        switch (category(e.kind())) {
            case ErrorCategory::Usage: return kUsage;
            case ErrorCategory::Numerical: return kNumerical;
            case ErrorCategory::Data: return kData;
        }
    } catch (const std::exception& e) {
        err << "gpfa " << config.command << ": " << e.what() << '\n';
        return kData;
    }
    return kSuccess;
}

}  // namespace gpfa::cli
