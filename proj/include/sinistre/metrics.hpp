#pragma once

// Confusion matrices and derived metrics. The positive class is an
// explicit parameter everywhere: the published reference numbers for this
// portfolio treat "without claims" (label 0) as the positive class, which
// is the opposite of the labelling convention, so nothing here hard-codes
// a side. Metrics with a zero denominator return an empty optional rather
// than a fake zero so parameter sweeps can carry degenerate cells through.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace sinistre {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    int positive_label = 1;

    std::uint64_t total() const noexcept { return tp + fn + fp + tn; }

    bool operator==(const ConfusionMatrix&) const = default;
};

inline ConfusionMatrix confusion_matrix(std::span<const int> actual,
                                        std::span<const int> predicted, int positive_label) {
    if (actual.size() != predicted.size()) {
        throw std::invalid_argument("confusion_matrix: label vectors differ in length");
    }
    if (actual.empty()) {
        throw std::invalid_argument("confusion_matrix: empty input");
    }
    ConfusionMatrix cm;
    cm.positive_label = positive_label;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const bool a = actual[i] == positive_label;
        const bool p = predicted[i] == positive_label;
        if (a && p) ++cm.tp;
        else if (a && !p) ++cm.fn;
        else if (!a && p) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

inline std::optional<double> precision(const ConfusionMatrix& cm) {
    const auto denom = cm.tp + cm.fp;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(denom);
}

inline std::optional<double> recall(const ConfusionMatrix& cm) {
    const auto denom = cm.tp + cm.fn;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(denom);
}

inline double accuracy(const ConfusionMatrix& cm) {
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

struct MetricsReport {
    ConfusionMatrix matrix;
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::string model_descriptor;
};

inline MetricsReport make_report(std::span<const int> actual, std::span<const int> predicted,
                                 int positive_label, std::string model_descriptor) {
    MetricsReport report;
    report.matrix = confusion_matrix(actual, predicted, positive_label);
    report.accuracy = accuracy(report.matrix);
    report.precision = precision(report.matrix);
    report.recall = recall(report.matrix);
    report.model_descriptor = std::move(model_descriptor);
    return report;
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j{
        {"model", r.model_descriptor},
        {"positive_label", r.matrix.positive_label},
        {"confusion",
         {{"tp", r.matrix.tp}, {"fn", r.matrix.fn}, {"fp", r.matrix.fp}, {"tn", r.matrix.tn}}},
        {"accuracy", r.accuracy}};
    j["precision"] = r.precision ? nlohmann::json(*r.precision) : nlohmann::json();
    j["recall"] = r.recall ? nlohmann::json(*r.recall) : nlohmann::json();
    return j;
}

/// Aligned plain-text rendering of the report for terminal output.
inline std::string format_report(const MetricsReport& r) {
    auto metric_str = [](const std::optional<double>& v) {
        if (!v) return std::string("undefined");
        std::ostringstream os;
        os << std::fixed << std::setprecision(4) << *v;
        return os.str();
    };
    std::ostringstream os;
    os << "model: " << r.model_descriptor << "\n";
    os << "positive class: label " << r.matrix.positive_label << "\n";
    const int w = 12;
    os << std::setw(w) << "" << std::setw(w) << "pred pos" << std::setw(w) << "pred neg" << "\n";
    os << std::setw(w) << "actual pos" << std::setw(w) << r.matrix.tp << std::setw(w)
       << r.matrix.fn << "\n";
    os << std::setw(w) << "actual neg" << std::setw(w) << r.matrix.fp << std::setw(w)
       << r.matrix.tn << "\n";
    std::ostringstream acc;
    acc << std::fixed << std::setprecision(4) << r.accuracy;
    os << "accuracy:  " << acc.str() << "\n";
    os << "precision: " << metric_str(r.precision) << "\n";
    os << "recall:    " << metric_str(r.recall) << "\n";
    return os.str();
}

} // namespace sinistre
