#pragma once

// Column scaling for the design matrix: z-score standardisation (mean 0,
// population standard deviation 1) or min-max normalisation into [0,1].
// Constant columns are flagged and passed through unchanged in both modes.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sinistre/encode.hpp"
#include "sinistre/matrix.hpp"

namespace sinistre {

enum class ScalingKind { zscore, minmax };

struct ColumnScaling {
    double mean = 0.0;   // z-score statistics
    double stddev = 0.0; // population form (denominator n)
    double min = 0.0;    // min-max statistics
    double max = 0.0;
    bool constant = false;

    bool operator==(const ColumnScaling&) const = default;
};

struct ScalingParams {
    ScalingKind kind = ScalingKind::zscore;
    std::vector<ColumnScaling> columns;

    bool operator==(const ScalingParams&) const = default;
};

/**
 * @brief Fits per-column statistics on a matrix.
 *
 * Means and variances use Welford's online update; min/max are tracked in
 * the same pass. A column is constant iff its min equals its max.
 */
inline ScalingParams fit_scaling(const Matrix& values, ScalingKind kind) {
    if (values.rows() < 2) {
        throw std::invalid_argument("fit_scaling: need at least 2 rows");
    }
    ScalingParams params;
    params.kind = kind;
    params.columns.resize(values.cols());

    std::vector<double> m2(values.cols(), 0.0);
    for (std::size_t c = 0; c < values.cols(); ++c) {
        params.columns[c].min = values(0, c);
        params.columns[c].max = values(0, c);
    }
    for (std::size_t r = 0; r < values.rows(); ++r) {
        const auto row = values.row(r);
        const double n = static_cast<double>(r + 1);
        for (std::size_t c = 0; c < values.cols(); ++c) {
            auto& col = params.columns[c];
            const double x = row[c];
            const double delta = x - col.mean;
            col.mean += delta / n;
            m2[c] += delta * (x - col.mean);
            if (x < col.min) col.min = x;
            if (x > col.max) col.max = x;
        }
    }
    for (std::size_t c = 0; c < values.cols(); ++c) {
        auto& col = params.columns[c];
        col.constant = (col.min == col.max);
        col.stddev = col.constant
                         ? 0.0
                         : std::sqrt(m2[c] / static_cast<double>(values.rows()));
    }
    return params;
}

inline ScalingParams fit_scaling(const EncodedMatrix& m, ScalingKind kind) {
    return fit_scaling(m.values, kind);
}

namespace detail {

inline void check_scaling_shape(const Matrix& values, const ScalingParams& params,
                                const char* op) {
    if (values.cols() != params.columns.size()) {
        throw std::invalid_argument(std::string(op) + ": matrix has " +
                                    std::to_string(values.cols()) + " columns but params have " +
                                    std::to_string(params.columns.size()));
    }
}

} // namespace detail

inline Matrix apply_scaling(Matrix values, const ScalingParams& params) {
    detail::check_scaling_shape(values, params, "apply_scaling");
    for (std::size_t r = 0; r < values.rows(); ++r) {
        auto row = values.row(r);
        for (std::size_t c = 0; c < values.cols(); ++c) {
            const auto& col = params.columns[c];
            if (col.constant) continue;
            if (params.kind == ScalingKind::zscore) {
                row[c] = (row[c] - col.mean) / col.stddev;
            } else {
                row[c] = (row[c] - col.min) / (col.max - col.min);
            }
        }
    }
    return values;
}

inline EncodedMatrix apply_scaling(EncodedMatrix m, const ScalingParams& params) {
    m.values = apply_scaling(std::move(m.values), params);
    return m;
}

/// Undoes apply_scaling with the same params.
inline Matrix invert_scaling(Matrix values, const ScalingParams& params) {
    detail::check_scaling_shape(values, params, "invert_scaling");
    for (std::size_t r = 0; r < values.rows(); ++r) {
        auto row = values.row(r);
        for (std::size_t c = 0; c < values.cols(); ++c) {
            const auto& col = params.columns[c];
            if (col.constant) continue;
            if (params.kind == ScalingKind::zscore) {
                row[c] = row[c] * col.stddev + col.mean;
            } else {
                row[c] = row[c] * (col.max - col.min) + col.min;
            }
        }
    }
    return values;
}

inline nlohmann::json scaling_to_json(const ScalingParams& params) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : params.columns) {
        cols.push_back({{"mean", c.mean},
                        {"stddev", c.stddev},
                        {"min", c.min},
                        {"max", c.max},
                        {"constant", c.constant}});
    }
    return nlohmann::json{
        {"kind", params.kind == ScalingKind::zscore ? "zscore" : "minmax"},
        {"columns", cols}};
}

inline ScalingParams scaling_from_json(const nlohmann::json& j) {
    ScalingParams params;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "zscore") {
        params.kind = ScalingKind::zscore;
    } else if (kind == "minmax") {
        params.kind = ScalingKind::minmax;
    } else {
        throw std::invalid_argument("scaling: unknown kind '" + kind + "'");
    }
    for (const auto& c : j.at("columns")) {
        ColumnScaling col;
        col.mean = c.at("mean").get<double>();
        col.stddev = c.at("stddev").get<double>();
        col.min = c.at("min").get<double>();
        col.max = c.at("max").get<double>();
        col.constant = c.at("constant").get<bool>();
        params.columns.push_back(col);
    }
    return params;
}

} // namespace sinistre
