#pragma once

// Domain records for the French motor-TPL portfolio: one row per policy in
// the policy table, one row per claim in the claim table, and the merged,
// labelled dataset the classifiers consume.

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sinistre {

enum class Coverage { Mini, Median1, Median2, Maxi };
enum class PayFreq { Annual, Biannual, Quarterly, Monthly };
enum class Usage { WorkPrivate, Retired, Professional, AllTrips };
enum class Sex { M, F };
enum class Fuel { Diesel, Gasoline, Hybrid };
enum class VehicleType { Tourism, Commercial };

namespace domain {

// Category tokens as they appear in the CSV files, in declared order.
// The declared order doubles as the integer code used when a categorical
// feature is pushed through a numeric column (label encoding).
inline constexpr std::array<std::string_view, 4> coverage_tokens{"Mini", "Median1", "Median2",
                                                                 "Maxi"};
inline constexpr std::array<std::string_view, 4> pay_freq_tokens{"Annual", "Biannual",
                                                                 "Quarterly", "Monthly"};
inline constexpr std::array<std::string_view, 4> usage_tokens{"WorkPrivate", "Retired",
                                                              "Professional", "AllTrips"};
inline constexpr std::array<std::string_view, 2> sex_tokens{"M", "F"};
inline constexpr std::array<std::string_view, 3> fuel_tokens{"Diesel", "Gasoline", "Hybrid"};
inline constexpr std::array<std::string_view, 2> vehicle_type_tokens{"Tourism", "Commercial"};

inline bool token_equal(std::string_view a, std::string_view b) {
    // case-insensitive: file conventions vary, the category set does not
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto la = std::tolower(static_cast<unsigned char>(a[i]));
        const auto lb = std::tolower(static_cast<unsigned char>(b[i]));
        if (la != lb) return false;
    }
    return true;
}

template <typename Enum, std::size_t N>
std::optional<Enum> enum_from_token(const std::array<std::string_view, N>& tokens,
                                    std::string_view cell) {
    for (std::size_t i = 0; i < N; ++i) {
        if (token_equal(tokens[i], cell)) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view enum_token(const std::array<std::string_view, N>& tokens, Enum value) {
    return tokens[static_cast<std::size_t>(value)];
}

} // namespace domain

inline std::string_view to_token(Coverage v) { return domain::enum_token(domain::coverage_tokens, v); }
inline std::string_view to_token(PayFreq v) { return domain::enum_token(domain::pay_freq_tokens, v); }
inline std::string_view to_token(Usage v) { return domain::enum_token(domain::usage_tokens, v); }
inline std::string_view to_token(Sex v) { return domain::enum_token(domain::sex_tokens, v); }
inline std::string_view to_token(Fuel v) { return domain::enum_token(domain::fuel_tokens, v); }
inline std::string_view to_token(VehicleType v) { return domain::enum_token(domain::vehicle_type_tokens, v); }

/**
 * @brief One row of the policy table.
 *
 * Second-driver fields are zero / absent when drv_drv2 is false. vh_age is
 * the only field that may be missing after parsing; every other numeric
 * cell must parse.
 */
struct PolicyRecord {
    std::string id_policy;
    double pol_bonus = 1.0; // no-claim coefficient, within [0.5, 3.5]
    Coverage pol_coverage = Coverage::Mini;
    int pol_duration = 0;
    int pol_sit_duration = 0;
    PayFreq pol_pay_freq = PayFreq::Annual;
    bool pol_payd = false;
    Usage pol_usage = Usage::WorkPrivate;
    std::string pol_insee_code; // 5 characters, first two identify the department
    bool drv_drv2 = false;
    int drv_age1 = 0;
    int drv_age2 = 0;
    Sex drv_sex1 = Sex::M;
    std::optional<Sex> drv_sex2; // nullopt when there is no second driver
    int drv_age_lic1 = 0;
    int drv_age_lic2 = 0;
    std::optional<int> vh_age;
    double vh_cyl = 0.0;
    double vh_din = 0.0;
    Fuel vh_fuel = Fuel::Diesel;
    std::string vh_make;
    std::string vh_model;
    int vh_sale_begin = 0;
    int vh_sale_end = 0;
    double vh_speed = 0.0;
    VehicleType vh_type = VehicleType::Tourism;
    double vh_value = 0.0;
    double vh_weight = 0.0;
};

/// One row of the claim table. claim_amount is bounded per row; negative
/// amounts arise from subrogation.
struct ClaimRecord {
    std::string id_client;
    std::string id_vehicle;
    int claim_nb = 1;
    double claim_amount = 0.0;
};

inline constexpr double kClaimAmountMin = -2000.0;
inline constexpr double kClaimAmountMax = 300000.0;
inline constexpr double kBonusMin = 0.5;
inline constexpr double kBonusMax = 3.5;

/// A policy joined with its aggregated claims and the binary target.
struct LabeledRow {
    PolicyRecord policy;
    int claim_nb = 0;
    double claim_amount = 0.0;
    int label = 0; // 1 iff claim_nb > 0
};

struct LabeledDataset {
    std::vector<LabeledRow> rows;

    std::size_t size() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }
};

} // namespace sinistre
