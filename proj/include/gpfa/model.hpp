#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "gpfa/types.hpp"

namespace gpfa {

enum class Algorithm { Gpfa1, Gpfa2, Sfa, Pfa, Random };

inline const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Gpfa1: return "gpfa1";
        case Algorithm::Gpfa2: return "gpfa2";
        case Algorithm::Sfa: return "sfa";
        case Algorithm::Pfa: return "pfa";
        case Algorithm::Random: return "random";
    }
    return "unknown";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
    for (Algorithm a : {Algorithm::Gpfa1, Algorithm::Gpfa2, Algorithm::Sfa, Algorithm::Pfa, Algorithm::Random}) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

/// Linear feature extractor y = A^T x with unit-norm columns, plus how it was made.
struct ProjectionModel {
    Algorithm algorithm = Algorithm::Random;
    Matrix extraction;      // N' x M, one extraction vector per column
    Vector eigenvalues;     // ascending, one per column
    std::map<std::string, std::string> params;

    Index input_dims() const { return extraction.rows(); }
    Index output_dims() const { return extraction.cols(); }

    template <typename T>
    void set_param(const std::string& key, const T& value) {
        std::ostringstream os;
        os.precision(17);
        os << value;
        params[key] = os.str();
    }
};

/// Largest |cos| between two distinct columns; 0 for a single column.
inline double max_column_cosine(const Matrix& a) {
    double worst = 0.0;
    for (Index i = 0; i < a.cols(); ++i) {
        for (Index j = i + 1; j < a.cols(); ++j) {
            const double c = a.col(i).dot(a.col(j)) / (a.col(i).norm() * a.col(j).norm());
            worst = std::max(worst, std::abs(c));
        }
    }
    return worst;
}

inline Matrix project(const ProjectionModel& model, const Matrix& x) {
    if (x.cols() != model.input_dims()) {
        throw Error(ErrorKind::DimensionMismatch, "series has " + std::to_string(x.cols()) +
                                                      " columns, model expects " +
                                                      std::to_string(model.input_dims()));
    }
    return x * model.extraction;
}

}  // namespace gpfa
