#pragma once

// Ingestion of the policy and claim tables: parse, build the join key,
// aggregate claims per policy, left-join onto the policy table, impute the
// odd missing vehicle age and derive the binary claim/no-claim label.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sinistre/csv.hpp"
#include "sinistre/records.hpp"

namespace sinistre {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Context-carrying cell accessors. Row numbers are 1-based file rows, so
// data row r is file row r+2 (header is row 1).

inline std::string cell_context(const CsvTable& t, std::size_t data_row, std::string_view col) {
    return t.source + " row " + std::to_string(data_row + 2) + ", column '" + std::string(col) +
           "'";
}

inline const std::string& raw_cell(const CsvTable& t, std::size_t data_row, std::size_t col_idx) {
    return t.rows[data_row][col_idx];
}

inline double require_double(const CsvTable& t, std::size_t row, std::size_t col,
                             std::string_view name) {
    const std::string& cell = raw_cell(t, row, col);
    if (auto v = parse_double_cell(cell)) return *v;
    throw IngestError(cell_context(t, row, name) +
                      (cell.empty() ? ": empty numeric cell" : ": unparseable numeric cell '" + cell + "'"));
}

inline long long require_int(const CsvTable& t, std::size_t row, std::size_t col,
                             std::string_view name) {
    const std::string& cell = raw_cell(t, row, col);
    if (auto v = parse_int_cell(cell)) return *v;
    throw IngestError(cell_context(t, row, name) +
                      (cell.empty() ? ": empty numeric cell" : ": unparseable numeric cell '" + cell + "'"));
}

inline bool parse_bool_token(std::string_view cell, bool& out) {
    for (auto token : {"Yes", "true", "1"}) {
        if (domain::token_equal(cell, token)) {
            out = true;
            return true;
        }
    }
    for (auto token : {"No", "false", "0"}) {
        if (domain::token_equal(cell, token)) {
            out = false;
            return true;
        }
    }
    return false;
}

template <typename Enum, std::size_t N>
Enum require_enum(const CsvTable& t, std::size_t row, std::size_t col, std::string_view name,
                  const std::array<std::string_view, N>& tokens) {
    const std::string& cell = raw_cell(t, row, col);
    if (auto v = domain::enum_from_token<Enum>(tokens, cell)) return *v;
    std::string allowed;
    for (auto tok : tokens) {
        if (!allowed.empty()) allowed += ", ";
        allowed += tok;
    }
    throw IngestError(cell_context(t, row, name) + ": unknown token '" + cell + "' (expected " +
                      allowed + ")");
}

} // namespace detail

/// Column names of the policy table, in table order.
inline const std::vector<std::string>& policy_columns() {
    static const std::vector<std::string> cols{
        "id_policy",    "pol_bonus",    "pol_coverage",  "pol_duration", "pol_sit_duration",
        "pol_pay_freq", "pol_payd",     "pol_usage",     "pol_insee_code", "drv_drv2",
        "drv_age1",     "drv_age2",     "drv_sex1",      "drv_sex2",     "drv_age_lic1",
        "drv_age_lic2", "vh_age",       "vh_cyl",        "vh_din",       "vh_fuel",
        "vh_make",      "vh_model",     "vh_sale_begin", "vh_sale_end",  "vh_speed",
        "vh_type",      "vh_value",     "vh_weight"};
    return cols;
}

/// Parses an already-loaded policy table. Unknown extra columns are
/// ignored; all named columns must be present.
inline std::vector<PolicyRecord> parse_policy_table(const CsvTable& table) {
    std::unordered_map<std::string, std::size_t> col;
    for (const auto& name : policy_columns()) {
        col.emplace(name, table.require_column(name));
    }
    auto idx = [&](std::string_view name) { return col.find(std::string(name))->second; };

    std::vector<PolicyRecord> records;
    records.reserve(table.rows.size());
    std::unordered_set<std::string> seen_ids;
    seen_ids.reserve(table.rows.size());

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        PolicyRecord rec;
        rec.id_policy = detail::raw_cell(table, r, idx("id_policy"));
        if (rec.id_policy.empty()) {
            throw IngestError(detail::cell_context(table, r, "id_policy") + ": empty key");
        }
        if (!seen_ids.insert(rec.id_policy).second) {
            throw IngestError(detail::cell_context(table, r, "id_policy") + ": duplicate key '" +
                              rec.id_policy + "'");
        }

        rec.pol_bonus = detail::require_double(table, r, idx("pol_bonus"), "pol_bonus");
        if (rec.pol_bonus < kBonusMin || rec.pol_bonus > kBonusMax) {
            throw IngestError(detail::cell_context(table, r, "pol_bonus") + ": value " +
                              format_double(rec.pol_bonus) + " outside [0.5, 3.5]");
        }
        rec.pol_coverage = detail::require_enum<Coverage>(table, r, idx("pol_coverage"),
                                                          "pol_coverage", domain::coverage_tokens);
        rec.pol_duration =
            static_cast<int>(detail::require_int(table, r, idx("pol_duration"), "pol_duration"));
        rec.pol_sit_duration = static_cast<int>(
            detail::require_int(table, r, idx("pol_sit_duration"), "pol_sit_duration"));
        rec.pol_pay_freq = detail::require_enum<PayFreq>(table, r, idx("pol_pay_freq"),
                                                         "pol_pay_freq", domain::pay_freq_tokens);
        if (!detail::parse_bool_token(detail::raw_cell(table, r, idx("pol_payd")), rec.pol_payd)) {
            throw IngestError(detail::cell_context(table, r, "pol_payd") + ": unknown token '" +
                              detail::raw_cell(table, r, idx("pol_payd")) + "' (expected Yes/No)");
        }
        rec.pol_usage = detail::require_enum<Usage>(table, r, idx("pol_usage"), "pol_usage",
                                                    domain::usage_tokens);
        rec.pol_insee_code = detail::raw_cell(table, r, idx("pol_insee_code"));
        if (rec.pol_insee_code.size() != 5) {
            throw IngestError(detail::cell_context(table, r, "pol_insee_code") +
                              ": expected 5 characters, got '" + rec.pol_insee_code + "'");
        }

        if (!detail::parse_bool_token(detail::raw_cell(table, r, idx("drv_drv2")), rec.drv_drv2)) {
            throw IngestError(detail::cell_context(table, r, "drv_drv2") + ": unknown token '" +
                              detail::raw_cell(table, r, idx("drv_drv2")) + "' (expected Yes/No)");
        }
        rec.drv_age1 = static_cast<int>(detail::require_int(table, r, idx("drv_age1"), "drv_age1"));
        rec.drv_sex1 = detail::require_enum<Sex>(table, r, idx("drv_sex1"), "drv_sex1",
                                                 domain::sex_tokens);
        rec.drv_age_lic1 =
            static_cast<int>(detail::require_int(table, r, idx("drv_age_lic1"), "drv_age_lic1"));

        // Second-driver fields zero-fill when absent; files encode absence as
        // an empty cell or a literal 0.
        {
            const std::string& cell = detail::raw_cell(table, r, idx("drv_age2"));
            rec.drv_age2 = cell.empty() ? 0 : static_cast<int>(detail::require_int(
                                                  table, r, idx("drv_age2"), "drv_age2"));
        }
        {
            const std::string& cell = detail::raw_cell(table, r, idx("drv_age_lic2"));
            rec.drv_age_lic2 = cell.empty() ? 0
                                            : static_cast<int>(detail::require_int(
                                                  table, r, idx("drv_age_lic2"), "drv_age_lic2"));
        }
        {
            const std::string& cell = detail::raw_cell(table, r, idx("drv_sex2"));
            if (cell.empty() || cell == "0") {
                rec.drv_sex2 = std::nullopt;
            } else if (auto s = domain::enum_from_token<Sex>(domain::sex_tokens, cell)) {
                rec.drv_sex2 = *s;
            } else {
                throw IngestError(detail::cell_context(table, r, "drv_sex2") +
                                  ": unknown token '" + cell + "' (expected M, F or empty)");
            }
        }

        {
            const std::string& cell = detail::raw_cell(table, r, idx("vh_age"));
            if (cell.empty()) {
                rec.vh_age = std::nullopt; // the only column allowed to be missing
            } else {
                rec.vh_age =
                    static_cast<int>(detail::require_int(table, r, idx("vh_age"), "vh_age"));
            }
        }
        rec.vh_cyl = detail::require_double(table, r, idx("vh_cyl"), "vh_cyl");
        rec.vh_din = detail::require_double(table, r, idx("vh_din"), "vh_din");
        rec.vh_fuel = detail::require_enum<Fuel>(table, r, idx("vh_fuel"), "vh_fuel",
                                                 domain::fuel_tokens);
        rec.vh_make = detail::raw_cell(table, r, idx("vh_make"));
        rec.vh_model = detail::raw_cell(table, r, idx("vh_model"));
        rec.vh_sale_begin = static_cast<int>(
            detail::require_int(table, r, idx("vh_sale_begin"), "vh_sale_begin"));
        rec.vh_sale_end =
            static_cast<int>(detail::require_int(table, r, idx("vh_sale_end"), "vh_sale_end"));
        rec.vh_speed = detail::require_double(table, r, idx("vh_speed"), "vh_speed");
        rec.vh_type = detail::require_enum<VehicleType>(table, r, idx("vh_type"), "vh_type",
                                                        domain::vehicle_type_tokens);
        rec.vh_value = detail::require_double(table, r, idx("vh_value"), "vh_value");
        rec.vh_weight = detail::require_double(table, r, idx("vh_weight"), "vh_weight");

        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<PolicyRecord> parse_policy_csv(const std::filesystem::path& path) {
    return parse_policy_table(read_csv(path));
}

/// Parses the claim table. The claim count column is optional: when absent
/// every row counts as one claim.
inline std::vector<ClaimRecord> parse_claim_table(const CsvTable& table) {
    const std::size_t id_client = table.require_column("id_client");
    const std::size_t id_vehicle = table.require_column("id_vehicle");
    const auto claim_nb = table.column("claim_nb");
    const std::size_t claim_amount = table.require_column("claim_amount");

    std::vector<ClaimRecord> claims;
    claims.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        ClaimRecord rec;
        rec.id_client = detail::raw_cell(table, r, id_client);
        rec.id_vehicle = detail::raw_cell(table, r, id_vehicle);
        if (rec.id_client.empty() || rec.id_vehicle.empty()) {
            throw IngestError(detail::cell_context(table, r, "id_client/id_vehicle") +
                              ": empty key component");
        }
        if (claim_nb) {
            rec.claim_nb =
                static_cast<int>(detail::require_int(table, r, *claim_nb, "claim_nb"));
            if (rec.claim_nb < 1) {
                throw IngestError(detail::cell_context(table, r, "claim_nb") +
                                  ": claim count must be >= 1, got " +
                                  std::to_string(rec.claim_nb));
            }
        }
        rec.claim_amount = detail::require_double(table, r, claim_amount, "claim_amount");
        if (rec.claim_amount < kClaimAmountMin || rec.claim_amount > kClaimAmountMax) {
            throw IngestError(detail::cell_context(table, r, "claim_amount") + ": value " +
                              format_double(rec.claim_amount) + " outside [-2000, 300000]");
        }
        claims.push_back(std::move(rec));
    }
    return claims;
}

inline std::vector<ClaimRecord> parse_claim_csv(const std::filesystem::path& path) {
    return parse_claim_table(read_csv(path));
}

/// Default join-key template. The exact concatenation used by the policy
/// table is configurable; placeholders {client} and {vehicle} are replaced
/// verbatim.
inline constexpr std::string_view kDefaultPolicyIdFormat = "{client}{vehicle}";

inline std::string build_policy_id(std::string_view id_client, std::string_view id_vehicle,
                                   std::string_view format = kDefaultPolicyIdFormat) {
    if (id_client.empty()) throw IngestError("build_policy_id: empty id_client");
    if (id_vehicle.empty()) throw IngestError("build_policy_id: empty id_vehicle");
    std::string out;
    out.reserve(format.size() + id_client.size() + id_vehicle.size());
    bool saw_client = false, saw_vehicle = false;
    for (std::size_t i = 0; i < format.size();) {
        if (format.compare(i, 8, "{client}") == 0) {
            out += id_client;
            i += 8;
            saw_client = true;
        } else if (format.compare(i, 9, "{vehicle}") == 0) {
            out += id_vehicle;
            i += 9;
            saw_vehicle = true;
        } else {
            out.push_back(format[i]);
            ++i;
        }
    }
    if (!saw_client || !saw_vehicle) {
        throw IngestError("build_policy_id: format '" + std::string(format) +
                          "' must contain {client} and {vehicle}");
    }
    return out;
}

struct ClaimTotals {
    int claim_nb = 0;
    double claim_amount = 0.0;
};

/// Sums claim counts and amounts per policy key. Ordered map so downstream
/// iteration is deterministic.
inline std::map<std::string, ClaimTotals> aggregate_claims(
    const std::vector<ClaimRecord>& claims,
    std::string_view id_format = kDefaultPolicyIdFormat) {
    std::map<std::string, ClaimTotals> totals;
    for (const auto& c : claims) {
        auto& t = totals[build_policy_id(c.id_client, c.id_vehicle, id_format)];
        t.claim_nb += c.claim_nb;
        t.claim_amount += c.claim_amount;
    }
    return totals;
}

/**
 * @brief Left join of the policy table with aggregated claims.
 *
 * Every policy is kept; policies without claims get zero counts/amounts and
 * label 0. Aggregate keys that match no policy are a hard error: silently
 * dropping claims would corrupt every statistic downstream.
 */
inline LabeledDataset merge(const std::vector<PolicyRecord>& policies,
                            const std::map<std::string, ClaimTotals>& aggregates) {
    std::unordered_set<std::string_view> policy_keys;
    policy_keys.reserve(policies.size());
    for (const auto& p : policies) policy_keys.insert(p.id_policy);

    std::vector<std::string> orphans;
    for (const auto& [key, _] : aggregates) {
        if (!policy_keys.count(key)) orphans.push_back(key);
    }
    if (!orphans.empty()) {
        std::string msg = "merge: " + std::to_string(orphans.size()) +
                          " aggregate key(s) missing from the policy table:";
        const std::size_t shown = std::min<std::size_t>(orphans.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) msg += " " + orphans[i];
        if (orphans.size() > shown) {
            msg += " (and " + std::to_string(orphans.size() - shown) + " more)";
        }
        throw IngestError(msg);
    }

    LabeledDataset out;
    out.rows.reserve(policies.size());
    for (const auto& p : policies) {
        LabeledRow row;
        row.policy = p;
        if (auto it = aggregates.find(p.id_policy); it != aggregates.end()) {
            row.claim_nb = it->second.claim_nb;
            row.claim_amount = it->second.claim_amount;
        }
        row.label = row.claim_nb > 0 ? 1 : 0;
        out.rows.push_back(std::move(row));
    }
    return out;
}

enum class ImputeStrategy { external_value, median, drop };

struct ExternalImputeValue {
    std::string id_policy;
    int vh_age = 0;
};

/**
 * @brief Removes missing vehicle ages.
 *
 * external_value sets a caller-supplied age on the named policy (the
 * portfolio has exactly one hole, whose true value lives in a companion
 * file); median fills every hole with the median of present values; drop
 * removes the affected rows.
 */
inline LabeledDataset impute_vh_age(LabeledDataset dataset, ImputeStrategy strategy,
                                    const std::optional<ExternalImputeValue>& external = {}) {
    switch (strategy) {
        case ImputeStrategy::external_value: {
            if (!external) {
                throw IngestError("impute_vh_age: external_value strategy needs a (policy, age) pair");
            }
            for (auto& row : dataset.rows) {
                if (row.policy.id_policy == external->id_policy) {
                    row.policy.vh_age = external->vh_age;
                }
            }
            for (const auto& row : dataset.rows) {
                if (!row.policy.vh_age) {
                    throw IngestError("impute_vh_age: policy '" + row.policy.id_policy +
                                      "' still missing vh_age after external fill");
                }
            }
            return dataset;
        }
        case ImputeStrategy::median: {
            std::vector<double> present;
            for (const auto& row : dataset.rows) {
                if (row.policy.vh_age) present.push_back(*row.policy.vh_age);
            }
            if (present.empty()) {
                const bool any_missing = std::any_of(
                    dataset.rows.begin(), dataset.rows.end(),
                    [](const LabeledRow& r) { return !r.policy.vh_age.has_value(); });
                if (any_missing) {
                    throw IngestError("impute_vh_age: no present vh_age values to take a median of");
                }
                return dataset;
            }
            std::sort(present.begin(), present.end());
            const std::size_t n = present.size();
            const double median = (n % 2 == 1) ? present[n / 2]
                                               : 0.5 * (present[n / 2 - 1] + present[n / 2]);
            for (auto& row : dataset.rows) {
                if (!row.policy.vh_age) {
                    row.policy.vh_age = static_cast<int>(std::llround(median));
                }
            }
            return dataset;
        }
        case ImputeStrategy::drop: {
            LabeledDataset out;
            out.rows.reserve(dataset.rows.size());
            for (auto& row : dataset.rows) {
                if (row.policy.vh_age) out.rows.push_back(std::move(row));
            }
            return out;
        }
    }
    throw IngestError("impute_vh_age: unknown strategy");
}

/// Policy count per aggregate claim count. Values sum to the dataset size.
inline std::map<int, std::size_t> claim_frequency_histogram(const LabeledDataset& dataset) {
    std::map<int, std::size_t> hist;
    for (const auto& row : dataset.rows) ++hist[row.claim_nb];
    return hist;
}

/// Reads a table produced by dump_merged_csv back into a LabeledDataset.
inline LabeledDataset parse_merged_table(const CsvTable& table) {
    const auto policies = parse_policy_table(table);
    const std::size_t claim_nb = table.require_column("claim_nb");
    const std::size_t claim_amount = table.require_column("claim_amount");
    const std::size_t label = table.require_column("label");

    LabeledDataset out;
    out.rows.reserve(policies.size());
    for (std::size_t r = 0; r < policies.size(); ++r) {
        LabeledRow row;
        row.policy = policies[r];
        row.claim_nb = static_cast<int>(detail::require_int(table, r, claim_nb, "claim_nb"));
        row.claim_amount = detail::require_double(table, r, claim_amount, "claim_amount");
        row.label = static_cast<int>(detail::require_int(table, r, label, "label"));
        if (row.label != (row.claim_nb > 0 ? 1 : 0)) {
            throw IngestError(detail::cell_context(table, r, "label") +
                              ": label inconsistent with claim_nb");
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline LabeledDataset load_merged_csv(const std::filesystem::path& path) {
    return parse_merged_table(read_csv(path));
}

/// Diagnostic dump of the merged table: the policy columns plus claim_nb,
/// claim_amount and label.
inline void dump_merged_csv(const LabeledDataset& dataset, std::ostream& out) {
    std::vector<std::string> header = policy_columns();
    header.insert(header.end(), {"claim_nb", "claim_amount", "label"});
    write_csv_row(out, header);

    for (const auto& row : dataset.rows) {
        const PolicyRecord& p = row.policy;
        std::vector<std::string> cells{
            p.id_policy,
            format_double(p.pol_bonus),
            std::string(to_token(p.pol_coverage)),
            std::to_string(p.pol_duration),
            std::to_string(p.pol_sit_duration),
            std::string(to_token(p.pol_pay_freq)),
            p.pol_payd ? "Yes" : "No",
            std::string(to_token(p.pol_usage)),
            p.pol_insee_code,
            p.drv_drv2 ? "Yes" : "No",
            std::to_string(p.drv_age1),
            std::to_string(p.drv_age2),
            std::string(to_token(p.drv_sex1)),
            p.drv_sex2 ? std::string(to_token(*p.drv_sex2)) : std::string(),
            std::to_string(p.drv_age_lic1),
            std::to_string(p.drv_age_lic2),
            p.vh_age ? std::to_string(*p.vh_age) : std::string(),
            format_double(p.vh_cyl),
            format_double(p.vh_din),
            std::string(to_token(p.vh_fuel)),
            p.vh_make,
            p.vh_model,
            std::to_string(p.vh_sale_begin),
            std::to_string(p.vh_sale_end),
            format_double(p.vh_speed),
            std::string(to_token(p.vh_type)),
            format_double(p.vh_value),
            format_double(p.vh_weight),
            std::to_string(row.claim_nb),
            format_double(row.claim_amount),
            std::to_string(row.label)};
        write_csv_row(out, cells);
    }
}

} // namespace sinistre
