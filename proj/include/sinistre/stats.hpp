#pragma once

// Exploratory statistics: binomial confidence intervals, claim proportions
// per feature level, Pearson correlations, department aggregation and
// seven-number summaries (linear-interpolation quantiles, sample standard
// deviation).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sinistre/csv.hpp"
#include "sinistre/encode.hpp"
#include "sinistre/matrix.hpp"
#include "sinistre/records.hpp"

namespace sinistre {

// --- normal quantile ----------------------------------------------------

/**
 * @brief Standard normal quantile (inverse CDF).
 *
 * Acklam's rational approximation refined by one Halley step against
 * erfc, good to full double precision across (0,1). z(0.975) =
 * 1.959964...
 */
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    }
    if (p == 0.5) return 0.0;
    if (p > 0.5) return -normal_quantile(1.0 - p); // antisymmetric by construction
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double z;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // One Halley refinement against the true CDF via erfc.
    const double e = 0.5 * std::erfc(-z / std::numbers::sqrt2) - p;
    const double u = e * std::numbers::sqrt2 * std::sqrt(std::numbers::pi) *
                     std::exp(z * z / 2.0);
    z = z - u / (1.0 + z * u / 2.0);
    return z;
}

/// Two-sided critical value: 1.959964 at level 0.95.
inline double z_for_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must be in (0,1)");
    }
    return normal_quantile(0.5 + level / 2.0);
}

// --- binomial proportion intervals ---------------------------------------

enum class IntervalMethod { wald, wilson };

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/**
 * @brief Normal-approximation (Wald) interval for a binomial proportion,
 * clamped to [0,1]. `method` switches to the Wilson score interval, which
 * behaves better near the boundaries.
 */
inline Interval wald_ci(std::uint64_t successes, std::uint64_t trials, double level = 0.95,
                        IntervalMethod method = IntervalMethod::wald) {
    if (trials == 0) throw std::invalid_argument("wald_ci: trials must be >= 1");
    if (successes > trials) throw std::invalid_argument("wald_ci: successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z = z_for_level(level);

    Interval ci;
    if (method == IntervalMethod::wald) {
        const double half = z * std::sqrt(p * (1.0 - p) / n);
        ci.low = p - half;
        ci.high = p + half;
    } else {
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double center = p + z2 / (2.0 * n);
        const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
        ci.low = (center - half) / denom;
        ci.high = (center + half) / denom;
    }
    ci.low = std::clamp(ci.low, 0.0, 1.0);
    ci.high = std::clamp(ci.high, 0.0, 1.0);
    return ci;
}

// --- correlation ---------------------------------------------------------

struct CorrelationMatrix {
    std::vector<std::string> names;
    Matrix values;                    // symmetric, unit diagonal; NaN where undefined
    std::vector<bool> constant_flags; // per column

    bool defined(std::size_t i, std::size_t j) const {
        return !constant_flags[i] && !constant_flags[j];
    }
};

/**
 * @brief Pairwise Pearson coefficients of the matrix columns.
 *
 * Constant columns have no defined correlation; their off-diagonal cells
 * are NaN and the column is flagged. Diagonal stays 1 by convention.
 */
inline CorrelationMatrix pearson_correlation_matrix(const Matrix& columns,
                                                    std::vector<std::string> names = {}) {
    const std::size_t n = columns.rows();
    const std::size_t p = columns.cols();
    if (n < 2) throw std::invalid_argument("pearson_correlation_matrix: need at least 2 rows");
    if (!names.empty() && names.size() != p) {
        throw std::invalid_argument("pearson_correlation_matrix: name count mismatch");
    }
    if (names.empty()) {
        for (std::size_t j = 0; j < p; ++j) names.push_back("col" + std::to_string(j));
    }

    std::vector<double> mean(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = columns.row(i);
        for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    }
    for (auto& m : mean) m /= static_cast<double>(n);

    Matrix cov(p, p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = columns.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            const double da = row[a] - mean[a];
            for (std::size_t b = a; b < p; ++b) {
                cov(a, b) += da * (row[b] - mean[b]);
            }
        }
    }

    CorrelationMatrix out;
    out.names = std::move(names);
    out.values = Matrix(p, p, std::numeric_limits<double>::quiet_NaN());
    out.constant_flags.resize(p);
    for (std::size_t j = 0; j < p; ++j) out.constant_flags[j] = (cov(j, j) == 0.0);

    for (std::size_t a = 0; a < p; ++a) {
        out.values(a, a) = 1.0;
        for (std::size_t b = a + 1; b < p; ++b) {
            if (out.constant_flags[a] || out.constant_flags[b]) continue;
            const double r =
                std::clamp(cov(a, b) / std::sqrt(cov(a, a) * cov(b, b)), -1.0, 1.0);
            out.values(a, b) = r;
            out.values(b, a) = r;
        }
    }
    return out;
}

/// Numeric columns entering the correlation heatmap by default.
inline std::vector<std::string> default_heatmap_columns() {
    return {"pol_bonus", "pol_duration", "pol_sit_duration", "drv_age1", "drv_age2",
            "drv_age_lic1", "drv_age_lic2", "vh_age", "vh_cyl", "vh_din",
            "vh_sale_begin", "vh_sale_end", "vh_speed", "vh_value", "vh_weight"};
}

/// Extracts named numeric feature columns from the dataset as a matrix.
inline Matrix numeric_feature_matrix(const LabeledDataset& dataset,
                                     const std::vector<std::string>& features) {
    Matrix out(dataset.size(), features.size());
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        for (std::size_t c = 0; c < features.size(); ++c) {
            out(r, c) = feature::numeric_of(dataset.rows[r].policy, features[c]);
        }
    }
    return out;
}

// --- departments ----------------------------------------------------------

/// First two characters of a 5-character INSEE municipality code,
/// uppercased so the Corsican codes 2A/2B come through canonically.
inline std::string department_code(std::string_view insee) {
    if (insee.size() != 5) {
        throw std::invalid_argument("department_code: INSEE code must have 5 characters, got '" +
                                    std::string(insee) + "'");
    }
    std::string code(insee.substr(0, 2));
    for (char& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return code;
}

/// Canonical 2-character form for codes coming from map files, where a
/// single digit may appear unpadded ("1" vs "01").
inline std::string normalize_department_code(std::string_view code) {
    std::string out(code);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (out.size() == 1) out.insert(out.begin(), '0');
    return out;
}

struct DepartmentAggregate {
    std::string code;
    std::uint64_t policy_count = 0;
    std::uint64_t claim_count = 0; // total claims (sum of claim_nb)
    double claim_amount = 0.0;
};

/// One aggregate per department present in the data, sorted by code.
inline std::vector<DepartmentAggregate> aggregate_by_department(const LabeledDataset& dataset) {
    if (dataset.empty()) {
        throw std::invalid_argument("aggregate_by_department: empty dataset");
    }
    std::map<std::string, DepartmentAggregate> by_code;
    for (const auto& row : dataset.rows) {
        const std::string code = department_code(row.policy.pol_insee_code);
        auto& agg = by_code[code];
        agg.code = code;
        agg.policy_count += 1;
        agg.claim_count += static_cast<std::uint64_t>(row.claim_nb);
        agg.claim_amount += row.claim_amount;
    }
    std::vector<DepartmentAggregate> out;
    out.reserve(by_code.size());
    for (auto& [_, agg] : by_code) out.push_back(std::move(agg));
    return out;
}

// --- summary statistics ----------------------------------------------------

struct SummaryStats {
    double mean = 0.0;
    std::optional<double> stddev; // sample (n-1) form; undefined for n == 1
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quantile of a sorted sample by linear interpolation between order
/// statistics (position q*(n-1)).
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must be in [0,1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline SummaryStats summary_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summary_stats: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    SummaryStats s;
    double sum = 0.0;
    for (double v : sorted) sum += v;
    const double n = static_cast<double>(sorted.size());
    s.mean = sum / n;
    if (sorted.size() > 1) {
        double ss = 0.0;
        for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    return s;
}

// --- claim proportions per feature level -----------------------------------

/// Bin specification for numeric features: either explicit ascending edges
/// (half-open bins, last bin closed) or a uniform width anchored at zero.
struct Binning {
    std::vector<double> edges;
    double width = 0.0;

    static Binning uniform(double width) {
        if (!(width > 0.0)) throw std::invalid_argument("Binning: width must be positive");
        Binning b;
        b.width = width;
        return b;
    }
    static Binning explicit_edges(std::vector<double> edges) {
        if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
            throw std::invalid_argument("Binning: need >= 2 ascending edges");
        }
        Binning b;
        b.edges = std::move(edges);
        return b;
    }
    bool empty() const noexcept { return edges.empty() && width <= 0.0; }
};

enum class ProportionNumerator { claiming_policies, total_claims };

struct ProportionRow {
    std::string level;      // category token or bin label
    double sort_key = 0.0;  // bin lower edge; category index for tokens
    std::uint64_t policy_count = 0;
    std::uint64_t claim_count = 0;
    double proportion = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

namespace stats_detail {

inline std::string bin_label(double lo, double hi) {
    return "[" + format_double(lo) + ", " + format_double(hi) + ")";
}

} // namespace stats_detail

/**
 * @brief Claim proportion per level of one feature, with confidence bands.
 *
 * The default numerator counts policies with at least one claim, so the
 * proportion is a binomial share and the Wald/Wilson interval applies. The
 * total-claims numerator counts every claim (a rate that can exceed 1);
 * its band is the normal approximation of a Poisson rate, p +- z*sqrt(p/n),
 * floored at zero. Levels with no policies are omitted.
 */
inline std::vector<ProportionRow> claim_proportion_by_level(
    const LabeledDataset& dataset, const std::string& feature, const Binning& binning = {},
    ProportionNumerator numerator = ProportionNumerator::claiming_policies, double level = 0.95,
    IntervalMethod method = IntervalMethod::wald) {
    const FeatureKind kind = feature::kind_of(feature);

    struct Cell {
        std::uint64_t policies = 0;
        std::uint64_t claims = 0;
    };
    std::map<double, Cell> by_bin;          // numeric features
    std::map<std::string, Cell> by_token;   // categorical features

    const bool categorical = (kind != FeatureKind::numeric);
    if (!categorical && binning.empty()) {
        throw std::invalid_argument("claim_proportion_by_level: numeric feature '" + feature +
                                    "' needs a binning spec");
    }

    for (const auto& row : dataset.rows) {
        const std::uint64_t claims =
            numerator == ProportionNumerator::claiming_policies
                ? static_cast<std::uint64_t>(row.label)
                : static_cast<std::uint64_t>(row.claim_nb);
        if (categorical) {
            auto& cell = by_token[feature::token_of(row.policy, feature)];
            cell.policies += 1;
            cell.claims += claims;
        } else {
            const double v = feature::numeric_of(row.policy, feature);
            double lo;
            if (binning.width > 0.0) {
                lo = std::floor(v / binning.width) * binning.width;
            } else {
                const auto& e = binning.edges;
                if (v < e.front() || v > e.back()) {
                    throw std::invalid_argument("claim_proportion_by_level: value " +
                                                format_double(v) + " outside bin edges for '" +
                                                feature + "'");
                }
                auto it = std::upper_bound(e.begin(), e.end(), v);
                const std::size_t idx =
                    std::min(static_cast<std::size_t>(it - e.begin()), e.size() - 1) - 1;
                lo = e[idx];
            }
            auto& cell = by_bin[lo];
            cell.policies += 1;
            cell.claims += claims;
        }
    }

    std::vector<ProportionRow> rows;
    auto push_row = [&](std::string label, double sort_key, const Cell& cell) {
        ProportionRow r;
        r.level = std::move(label);
        r.sort_key = sort_key;
        r.policy_count = cell.policies;
        r.claim_count = cell.claims;
        const double n = static_cast<double>(cell.policies);
        r.proportion = static_cast<double>(cell.claims) / n;
        if (numerator == ProportionNumerator::claiming_policies) {
            const Interval ci = wald_ci(cell.claims, cell.policies, level, method);
            r.ci_low = ci.low;
            r.ci_high = ci.high;
        } else {
            const double half = z_for_level(level) * std::sqrt(r.proportion / n);
            r.ci_low = std::max(0.0, r.proportion - half);
            r.ci_high = r.proportion + half;
        }
        rows.push_back(std::move(r));
    };

    if (categorical) {
        double index = 0.0;
        for (const auto& [token, cell] : by_token) {
            push_row(token, index, cell);
            index += 1.0;
        }
    } else {
        for (const auto& [lo, cell] : by_bin) {
            const double hi =
                binning.width > 0.0
                    ? lo + binning.width
                    : *std::upper_bound(binning.edges.begin(), binning.edges.end(), lo);
            push_row(stats_detail::bin_label(lo, hi), lo, cell);
        }
    }
    return rows;
}

/// Bin widths used for the standard exploration figures.
inline Binning default_binning_for(std::string_view feature) {
    if (feature == "drv_age1" || feature == "drv_age2" || feature == "vh_age") {
        return Binning::uniform(5.0);
    }
    if (feature == "vh_speed") return Binning::uniform(25.0);
    if (feature == "pol_duration" || feature == "pol_sit_duration") {
        return Binning::uniform(1.0);
    }
    return {};
}

} // namespace sinistre
