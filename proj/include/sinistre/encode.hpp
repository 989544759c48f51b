#pragma once

// Design-matrix construction: turns the merged policy dataset into a dense
// numeric matrix. Categorical features expand to one indicator column per
// observed category (full one-hot); numeric features pass through. Column
// order is deterministic: numeric features in table order first, then dummy
// groups in the order of the categorical list, categories sorted lexically.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sinistre/csv.hpp"
#include "sinistre/hashing.hpp"
#include "sinistre/matrix.hpp"
#include "sinistre/records.hpp"

namespace sinistre {

class EncodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ColumnKind { numeric, dummy };

struct ColumnSpec {
    std::string name;           // unique column name, e.g. "vh_speed" or "pol_coverage_Maxi"
    std::string source_feature; // the feature the column came from
    ColumnKind kind = ColumnKind::numeric;
    std::string category;       // category token for dummy columns, empty otherwise

    bool operator==(const ColumnSpec&) const = default;
};

struct FeatureSchema {
    std::vector<ColumnSpec> columns;

    std::size_t size() const noexcept { return columns.size(); }

    std::optional<std::size_t> column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].name == name) return i;
        }
        return std::nullopt;
    }

    bool operator==(const FeatureSchema&) const = default;
};

/// Design matrix plus provenance: values, the schema describing each
/// column, and the per-row binary labels.
struct EncodedMatrix {
    Matrix values;
    FeatureSchema schema;
    std::vector<int> labels;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }
};

enum class FeatureKind { numeric, categorical, open_categorical };

namespace feature {

struct Descriptor {
    std::string_view name;
    FeatureKind kind;
};

/// Model-usable features of the policy table, in table order.
inline const std::vector<Descriptor>& table_features() {
    static const std::vector<Descriptor> fs{
        {"pol_bonus", FeatureKind::numeric},
        {"pol_coverage", FeatureKind::categorical},
        {"pol_duration", FeatureKind::numeric},
        {"pol_sit_duration", FeatureKind::numeric},
        {"pol_pay_freq", FeatureKind::categorical},
        {"pol_payd", FeatureKind::categorical},
        {"pol_usage", FeatureKind::categorical},
        {"pol_insee_code", FeatureKind::open_categorical},
        {"drv_drv2", FeatureKind::categorical},
        {"drv_age1", FeatureKind::numeric},
        {"drv_age2", FeatureKind::numeric},
        {"drv_sex1", FeatureKind::categorical},
        {"drv_sex2", FeatureKind::categorical},
        {"drv_age_lic1", FeatureKind::numeric},
        {"drv_age_lic2", FeatureKind::numeric},
        {"vh_age", FeatureKind::numeric},
        {"vh_cyl", FeatureKind::numeric},
        {"vh_din", FeatureKind::numeric},
        {"vh_fuel", FeatureKind::categorical},
        {"vh_make", FeatureKind::open_categorical},
        {"vh_model", FeatureKind::open_categorical},
        {"vh_sale_begin", FeatureKind::numeric},
        {"vh_sale_end", FeatureKind::numeric},
        {"vh_speed", FeatureKind::numeric},
        {"vh_type", FeatureKind::categorical},
        {"vh_value", FeatureKind::numeric},
        {"vh_weight", FeatureKind::numeric},
    };
    return fs;
}

inline FeatureKind kind_of(std::string_view name) {
    for (const auto& f : table_features()) {
        if (f.name == name) return f.kind;
    }
    throw EncodeError("unknown feature '" + std::string(name) + "'");
}

/// Token of a categorical feature for one row. The absent second driver
/// carries the dedicated "None" category.
inline std::string token_of(const PolicyRecord& p, std::string_view name) {
    if (name == "pol_coverage") return std::string(to_token(p.pol_coverage));
    if (name == "pol_pay_freq") return std::string(to_token(p.pol_pay_freq));
    if (name == "pol_payd") return p.pol_payd ? "Yes" : "No";
    if (name == "pol_usage") return std::string(to_token(p.pol_usage));
    if (name == "pol_insee_code") return p.pol_insee_code;
    if (name == "drv_drv2") return p.drv_drv2 ? "Yes" : "No";
    if (name == "drv_sex1") return std::string(to_token(p.drv_sex1));
    if (name == "drv_sex2") return p.drv_sex2 ? std::string(to_token(*p.drv_sex2)) : "None";
    if (name == "vh_fuel") return std::string(to_token(p.vh_fuel));
    if (name == "vh_type") return std::string(to_token(p.vh_type));
    throw EncodeError("feature '" + std::string(name) + "' has no category token");
}

/// Numeric value of a feature for one row. Categorical features fall back
/// to their declared-domain index (label encoding: No=0/Yes=1, M=0/F=1,
/// None=0/M=1/F=2 for the second driver). Open-domain strings have no
/// numeric form.
inline double numeric_of(const PolicyRecord& p, std::string_view name) {
    if (name == "pol_bonus") return p.pol_bonus;
    if (name == "pol_duration") return p.pol_duration;
    if (name == "pol_sit_duration") return p.pol_sit_duration;
    if (name == "drv_age1") return p.drv_age1;
    if (name == "drv_age2") return p.drv_age2;
    if (name == "drv_age_lic1") return p.drv_age_lic1;
    if (name == "drv_age_lic2") return p.drv_age_lic2;
    if (name == "vh_age") {
        if (!p.vh_age) {
            throw EncodeError("policy '" + p.id_policy +
                              "' has missing vh_age; impute before encoding");
        }
        return *p.vh_age;
    }
    if (name == "vh_cyl") return p.vh_cyl;
    if (name == "vh_din") return p.vh_din;
    if (name == "vh_sale_begin") return p.vh_sale_begin;
    if (name == "vh_sale_end") return p.vh_sale_end;
    if (name == "vh_speed") return p.vh_speed;
    if (name == "vh_value") return p.vh_value;
    if (name == "vh_weight") return p.vh_weight;

    switch (kind_of(name)) {
        case FeatureKind::categorical: {
            if (name == "pol_coverage") return static_cast<double>(p.pol_coverage);
            if (name == "pol_pay_freq") return static_cast<double>(p.pol_pay_freq);
            if (name == "pol_payd") return p.pol_payd ? 1.0 : 0.0;
            if (name == "pol_usage") return static_cast<double>(p.pol_usage);
            if (name == "drv_drv2") return p.drv_drv2 ? 1.0 : 0.0;
            if (name == "drv_sex1") return static_cast<double>(p.drv_sex1);
            if (name == "drv_sex2") return p.drv_sex2 ? 1.0 + static_cast<double>(*p.drv_sex2) : 0.0;
            if (name == "vh_fuel") return static_cast<double>(p.vh_fuel);
            if (name == "vh_type") return static_cast<double>(p.vh_type);
            break;
        }
        default:
            break;
    }
    throw EncodeError("feature '" + std::string(name) + "' cannot be used as a numeric column");
}

} // namespace feature

/// Features entering the design matrix by default: everything except the
/// open-vocabulary identifiers (vh_make, vh_model, pol_insee_code).
inline std::vector<std::string> default_model_features() {
    std::vector<std::string> out;
    for (const auto& f : feature::table_features()) {
        if (f.kind == FeatureKind::open_categorical) continue;
        out.emplace_back(f.name);
    }
    return out;
}

/// Features that expand to indicator columns by default: the eight
/// low-cardinality categoricals plus the second-driver sex (with its
/// "None" category), so the matrix stays fully numeric and dense.
inline std::vector<std::string> default_categorical_features() {
    return {"pol_coverage", "pol_pay_freq", "pol_payd", "pol_usage",
            "drv_drv2",     "drv_sex1",     "vh_fuel",  "vh_type",
            "drv_sex2"};
}

struct EncodeSpec {
    std::vector<std::string> features = default_model_features();
    std::vector<std::string> categorical = default_categorical_features();
};

namespace detail {

inline bool contains(const std::vector<std::string>& xs, std::string_view x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

} // namespace detail

/**
 * @brief Derives the column schema for a dataset under an encoding spec.
 *
 * Dummy categories are the categories observed in the data, sorted
 * lexically — the schema is data-dependent and must be frozen (saved with
 * the model) to encode new rows consistently.
 */
inline FeatureSchema build_schema(const LabeledDataset& dataset, const EncodeSpec& spec = {}) {
    for (const auto& f : spec.categorical) {
        if (!detail::contains(spec.features, f)) continue;
        const auto kind = feature::kind_of(f);
        if (kind == FeatureKind::numeric) {
            throw EncodeError("feature '" + f + "' is numeric and cannot be one-hot encoded");
        }
    }

    FeatureSchema schema;
    // numeric passthrough columns, table order
    for (const auto& f : feature::table_features()) {
        if (!detail::contains(spec.features, std::string(f.name))) continue;
        if (detail::contains(spec.categorical, std::string(f.name))) continue;
        schema.columns.push_back(
            {std::string(f.name), std::string(f.name), ColumnKind::numeric, ""});
    }
    // dummy groups, categorical-list order, categories sorted lexically
    for (const auto& f : spec.categorical) {
        if (!detail::contains(spec.features, f)) continue;
        std::set<std::string> categories;
        for (const auto& row : dataset.rows) {
            categories.insert(feature::token_of(row.policy, f));
        }
        for (const auto& cat : categories) {
            schema.columns.push_back({f + "_" + cat, f, ColumnKind::dummy, cat});
        }
    }

    std::set<std::string> names;
    for (const auto& c : schema.columns) {
        if (!names.insert(c.name).second) {
            throw EncodeError("duplicate column name '" + c.name + "' in schema");
        }
    }
    return schema;
}

/// Encodes rows against a frozen schema. A category token without a
/// matching dummy column is an error (unseen category at transform time).
inline EncodedMatrix encode_with_schema(const LabeledDataset& dataset,
                                        const FeatureSchema& schema) {
    EncodedMatrix out;
    out.schema = schema;
    out.values = Matrix(dataset.size(), schema.size());
    out.labels.reserve(dataset.size());

    // dummy-group lookup: source feature -> (category -> column index)
    std::map<std::string, std::map<std::string, std::size_t>, std::less<>> groups;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].kind == ColumnKind::dummy) {
            groups[schema.columns[c].source_feature][schema.columns[c].category] = c;
        }
    }

    for (std::size_t r = 0; r < dataset.rows.size(); ++r) {
        const auto& row = dataset.rows[r];
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            const auto& col = schema.columns[c];
            if (col.kind == ColumnKind::numeric) {
                out.values(r, c) = feature::numeric_of(row.policy, col.source_feature);
            }
        }
        for (const auto& [source, cats] : groups) {
            const std::string token = feature::token_of(row.policy, source);
            auto it = cats.find(token);
            if (it == cats.end()) {
                throw EncodeError("row " + std::to_string(r) + ": unseen category '" + token +
                                  "' for feature '" + source + "'");
            }
            out.values(r, it->second) = 1.0;
        }
        out.labels.push_back(row.label);
    }
    return out;
}

/// One-shot schema derivation plus encoding.
inline EncodedMatrix one_hot_encode(const LabeledDataset& dataset, const EncodeSpec& spec = {}) {
    return encode_with_schema(dataset, build_schema(dataset, spec));
}

// --- schema serialization ---------------------------------------------

inline nlohmann::json schema_to_json(const FeatureSchema& schema) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : schema.columns) {
        cols.push_back({{"name", c.name},
                        {"source", c.source_feature},
                        {"kind", c.kind == ColumnKind::numeric ? "numeric" : "dummy"},
                        {"category", c.category}});
    }
    return nlohmann::json{{"columns", cols}};
}

inline FeatureSchema schema_from_json(const nlohmann::json& j) {
    FeatureSchema schema;
    for (const auto& c : j.at("columns")) {
        ColumnSpec spec;
        spec.name = c.at("name").get<std::string>();
        spec.source_feature = c.at("source").get<std::string>();
        const auto kind = c.at("kind").get<std::string>();
        if (kind == "numeric") {
            spec.kind = ColumnKind::numeric;
        } else if (kind == "dummy") {
            spec.kind = ColumnKind::dummy;
        } else {
            throw EncodeError("schema: unknown column kind '" + kind + "'");
        }
        spec.category = c.at("category").get<std::string>();
        schema.columns.push_back(std::move(spec));
    }
    return schema;
}

/// Stable fingerprint of a schema, used to detect model/dataset mismatches.
inline std::uint64_t schema_hash(const FeatureSchema& schema) {
    return fnv1a64(schema_to_json(schema).dump());
}

/// Writes the encoded matrix as CSV (column names as header, label last).
inline void write_encoded_csv(const EncodedMatrix& m, std::ostream& out) {
    std::vector<std::string> header;
    header.reserve(m.cols() + 1);
    for (const auto& c : m.schema.columns) header.push_back(c.name);
    header.push_back("label");
    write_csv_row(out, header);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<std::string> cells;
        cells.reserve(m.cols() + 1);
        for (std::size_t c = 0; c < m.cols(); ++c) cells.push_back(format_double(m.values(r, c)));
        cells.push_back(std::to_string(m.labels[r]));
        write_csv_row(out, cells);
    }
}

} // namespace sinistre
