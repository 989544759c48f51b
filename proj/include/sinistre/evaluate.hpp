#pragma once

// Model-level evaluation: run a trained classifier over a labelled test
// matrix and derive the metrics report in one step.

#include <span>
#include <string>

#include "sinistre/knn.hpp"
#include "sinistre/logreg.hpp"
#include "sinistre/metrics.hpp"

namespace sinistre {

inline MetricsReport evaluate(const KnnModel& model, const Matrix& test_x,
                              std::span<const int> test_y, int positive_label,
                              unsigned threads = 1) {
    if (test_x.rows() == 0) {
        throw std::invalid_argument("evaluate: empty test set");
    }
    const auto predicted = predict(test_x, model, threads);
    return make_report(test_y, predicted, positive_label,
                       "knn k=" + std::to_string(model.k));
}

inline MetricsReport evaluate(const LogregModel& model, const Matrix& test_x,
                              std::span<const int> test_y, int positive_label,
                              double threshold = 0.5) {
    if (test_x.rows() == 0) {
        throw std::invalid_argument("evaluate: empty test set");
    }
    const auto predicted = predict(test_x, model, threshold);
    return make_report(test_y, predicted, positive_label, "logreg");
}

} // namespace sinistre
