#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gpfa/evaluation.hpp"
#include "gpfa/graph.hpp"
#include "gpfa/model.hpp"
#include "gpfa/preprocessing.hpp"

namespace gpfa::io {

/// Shortest text that is still exact: 17 significant digits.
inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, end);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline bool parse_number(std::string_view token, double& out) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size() && !token.empty();
}

inline std::string location(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

inline std::ofstream open_out(const std::filesystem::path& path, bool append = false) {
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    return out;
}

}  // namespace detail

/// Reads a comma-separated series, one time step per line. A first line that is not all
/// numbers is taken as column names. Non-finite values are rejected.
inline TimeSeries read_series(const std::filesystem::path& path) {
    std::ifstream in = detail::open_in(path);
    TimeSeries series;
    std::vector<double> values;
    std::size_t columns = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(line, ',');
        std::vector<double> parsed(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = detail::parse_number(fields[i], parsed[i]);

        if (!numeric && rows == 0 && series.names.empty()) {
            for (auto f : fields) series.names.emplace_back(f);
            columns = fields.size();
            continue;
        }
        if (!numeric) {
            throw Error(ErrorKind::ParseError, detail::location(path, line_no) + "expected decimal numbers");
        }
        for (double v : parsed) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::ParseError, detail::location(path, line_no) + "non-finite value");
            }
        }
        if (columns == 0) columns = fields.size();
        if (fields.size() != columns) {
            throw Error(ErrorKind::RaggedRows, detail::location(path, line_no) + "expected " +
                                                   std::to_string(columns) + " columns, found " +
                                                   std::to_string(fields.size()));
        }
        values.insert(values.end(), parsed.begin(), parsed.end());
        ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::EmptyFile, path.string() + " has no data rows");
    series.values = Eigen::Map<const Matrix>(values.data(), static_cast<Index>(rows), static_cast<Index>(columns));
    return series;
}

inline void write_series(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    if (!series.names.empty()) {
        for (std::size_t i = 0; i < series.names.size(); ++i) out << (i ? "," : "") << series.names[i];
        out << '\n';
    }
    for (Index r = 0; r < series.values.rows(); ++r) {
        for (Index c = 0; c < series.values.cols(); ++c) {
            out << (c ? "," : "") << format_double(series.values(r, c));
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

inline void write_series(const Matrix& values, const std::filesystem::path& path) {
    write_series(TimeSeries{values, {}}, path);
}

inline constexpr std::string_view report_header =
    "algorithm,variant,p,k,q,M,R,K,S_train,S_test,N,seed_base,repetitions,mean_predictability,stddev,"
    "wall_time_seconds";

inline std::string report_row(const ExperimentStats& s) {
    const ExperimentParams& p = s.params;
    const char* variant = !s.label.empty()                 ? "none"
                          : p.algorithm == Algorithm::Gpfa1 ? "clique"
                          : p.algorithm == Algorithm::Gpfa2 ? "star"
                                                            : "none";
    std::ostringstream os;
    os << (s.label.empty() ? std::string(to_string(p.algorithm)) : s.label) << ',' << variant << ',' << p.order << ',' << p.k << ',' << p.q << ','
       << p.output_dims << ',' << p.iterations << ',' << p.pfa_K << ',' << p.train_samples << ','
       << p.test_samples << ',' << p.dims << ',' << s.base_seed << ',' << s.runs << ',' << format_double(s.mean)
       << ',' << format_double(s.stddev) << ',' << format_double(s.wall_time_seconds);
    return os.str();
}

/// Writes (or appends to) a report CSV. The header is written when the file is new or empty.
inline void write_report(const std::vector<ExperimentStats>& rows, const std::filesystem::path& path,
                         bool append = false) {
    std::error_code ec;
    const bool has_content = append && std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0;
    std::ofstream out = detail::open_out(path, append);
    if (!has_content) out << report_header << '\n';
    for (const auto& row : rows) out << report_row(row) << '\n';
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

namespace detail {

inline void write_values(std::ostream& out, const auto& v) {
    for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_double(v(i));
    out << '\n';
}

inline std::vector<double> read_values(std::istream& in, const std::filesystem::path& path, std::size_t& line_no,
                                       Index expected) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, location(path, line_no + 1) + "unexpected end of file");
    ++line_no;
    std::vector<double> out;
    std::istringstream is(line);
    std::string token;
    while (is >> token) {
        double v = 0.0;
        if (!parse_number(token, v) || !std::isfinite(v)) {
            throw Error(ErrorKind::ParseError, location(path, line_no) + "bad number '" + token + "'");
        }
        out.push_back(v);
    }
    if (static_cast<Index>(out.size()) != expected) {
        throw Error(ErrorKind::ParseError, location(path, line_no) + "expected " + std::to_string(expected) +
                                               " values, found " + std::to_string(out.size()));
    }
    return out;
}

inline std::map<std::string, std::string> read_header(std::istream& in, const std::filesystem::path& path,
                                                      std::size_t& line_no) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::EmptyFile, path.string() + " is empty");
    ++line_no;
    std::map<std::string, std::string> kv;
    std::istringstream is(line);
    std::string token;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::ParseError, location(path, line_no) + "expected key=value, got '" + token + "'");
        }
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return kv;
}

inline Index header_index(const std::map<std::string, std::string>& kv, const std::string& key,
                          const std::filesystem::path& path) {
    const auto it = kv.find(key);
    double v = 0.0;
    if (it == kv.end() || !parse_number(it->second, v) || v < 1 || v != std::floor(v)) {
        throw Error(ErrorKind::ParseError, location(path, 1) + "missing or invalid '" + key + "'");
    }
    return static_cast<Index>(v);
}

}  // namespace detail

/// Model file: a header line "algorithm=<tag> input_dims=<N'> output_dims=<M> <key=value>...",
/// then M lines holding the N' entries of each extraction vector, then one line of M eigenvalues.
inline void write_model(const ProjectionModel& model, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "algorithm=" << to_string(model.algorithm) << " input_dims=" << model.input_dims()
        << " output_dims=" << model.output_dims();
    for (const auto& [key, value] : model.params) out << ' ' << key << '=' << value;
    out << '\n';
    for (Index c = 0; c < model.output_dims(); ++c) detail::write_values(out, model.extraction.col(c));
    detail::write_values(out, model.eigenvalues);
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

inline ProjectionModel read_model(const std::filesystem::path& path) {
    std::ifstream in = detail::open_in(path);
    std::size_t line_no = 0;
    auto kv = detail::read_header(in, path, line_no);
    ProjectionModel model;
    const auto algorithm = parse_algorithm(kv["algorithm"]);
    if (!algorithm) throw Error(ErrorKind::ParseError, detail::location(path, 1) + "unknown algorithm");
    model.algorithm = *algorithm;
    const Index n = detail::header_index(kv, "input_dims", path);
    const Index m = detail::header_index(kv, "output_dims", path);
    kv.erase("algorithm");
    kv.erase("input_dims");
    kv.erase("output_dims");
    model.params = std::move(kv);
    model.extraction.resize(n, m);
    for (Index c = 0; c < m; ++c) {
        const auto col = detail::read_values(in, path, line_no, n);
        model.extraction.col(c) = Eigen::Map<const Vector>(col.data(), n);
    }
    const auto eig = detail::read_values(in, path, line_no, m);
    model.eigenvalues = Eigen::Map<const Vector>(eig.data(), m);
    return model;
}

/// Whitening file: header line, the mean, N' lines of transform columns, then the N'
/// principal standard deviations.
inline void write_whitening(const WhiteningModel& model, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "whitening=pca input_dims=" << model.input_dims() << " output_dims=" << model.output_dims()
        << " variance_retained=" << format_double(model.variance_retained) << '\n';
    detail::write_values(out, model.mean);
    for (Index c = 0; c < model.output_dims(); ++c) detail::write_values(out, model.transform.col(c));
    detail::write_values(out, model.inverse_scale);
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

inline WhiteningModel read_whitening(const std::filesystem::path& path) {
    std::ifstream in = detail::open_in(path);
    std::size_t line_no = 0;
    const auto kv = detail::read_header(in, path, line_no);
    if (!kv.contains("whitening")) throw Error(ErrorKind::ParseError, detail::location(path, 1) + "not a whitening file");
    const Index n = detail::header_index(kv, "input_dims", path);
    const Index m = detail::header_index(kv, "output_dims", path);
    WhiteningModel model;
    if (auto it = kv.find("variance_retained"); it != kv.end()) detail::parse_number(it->second, model.variance_retained);
    const auto mean = detail::read_values(in, path, line_no, n);
    model.mean = Eigen::Map<const Vector>(mean.data(), n);
    model.transform.resize(n, m);
    for (Index c = 0; c < m; ++c) {
        const auto col = detail::read_values(in, path, line_no, n);
        model.transform.col(c) = Eigen::Map<const Vector>(col.data(), n);
    }
    const auto scale = detail::read_values(in, path, line_no, m);
    model.inverse_scale = Eigen::Map<const Vector>(scale.data(), m);
    return model;
}

/// Tab-separated "i j weight" lines, 1-based, one per stored entry (i <= j).
inline void write_edge_list(const GraphWeights& graph, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    for (const Edge& e : graph.edges()) out << e.i + 1 << '\t' << e.j + 1 << '\t' << e.weight << '\n';
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace gpfa::io
