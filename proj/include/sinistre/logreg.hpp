#pragma once

// Binary logistic regression fitted by full-batch gradient descent with a
// backtracking (Armijo) line search. The data term is the Bernoulli
// negative log-likelihood of the sigmoid probabilities; a squared-error
// variant (on the probabilities) is available behind a flag. Penalties:
// none, lasso (lambda/2 * sum |w|), ridge (lambda/2 * sum w^2), or an
// elastic-net mix lambda * (mix * |w|_1 + (1-mix)/2 * |w|_2^2). The
// intercept is never penalized.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sinistre/encode.hpp"
#include "sinistre/matrix.hpp"

namespace sinistre {

enum class Penalty { none, lasso, ridge, elastic_net };

struct PenaltySpec {
    Penalty kind = Penalty::none;
    double mix = 0.5; // elastic-net L1 proportion, in [0,1]

    static PenaltySpec none() { return {Penalty::none, 0.0}; }
    static PenaltySpec lasso() { return {Penalty::lasso, 0.0}; }
    static PenaltySpec ridge() { return {Penalty::ridge, 0.0}; }
    static PenaltySpec elastic_net(double mix = 0.5) {
        if (!(mix >= 0.0 && mix <= 1.0)) {
            throw std::invalid_argument("elastic_net mix must be in [0,1]");
        }
        return {Penalty::elastic_net, mix};
    }

    bool operator==(const PenaltySpec&) const = default;
};

enum class DataTerm { log_likelihood, squared_error };

struct FitConfig {
    std::size_t max_iterations = 5000;
    double tolerance = 1e-8;      // relative objective change
    double learning_rate = 0.0;   // 0 = backtracking line search
    std::uint64_t seed = 0;       // reserved; initialization is zero, not random
    DataTerm data_term = DataTerm::log_likelihood;

    void validate() const {
        if (max_iterations < 1) throw std::invalid_argument("FitConfig: max_iterations >= 1");
        if (!(tolerance > 0.0)) throw std::invalid_argument("FitConfig: tolerance > 0");
        if (learning_rate < 0.0) throw std::invalid_argument("FitConfig: learning_rate >= 0");
    }
};

struct TracePoint {
    std::size_t iteration;
    double objective;
};

struct LogregModel {
    std::vector<double> weights;
    double intercept = 0.0;
    PenaltySpec penalty;
    double lambda = 0.0;
    FeatureSchema schema; // empty when trained on a bare matrix
    std::vector<TracePoint> trace;
    bool converged = false;
};

/// Numerically stable logistic function; never overflows and stays within
/// (0,1) in double precision for any finite input.
inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow; the per-row NLL building block.
inline double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

inline double linear_score(std::span<const double> x, std::span<const double> weights,
                           double intercept) {
    if (x.size() != weights.size()) {
        throw std::invalid_argument("linear_score: dimension mismatch (" +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(weights.size()) + ")");
    }
    double z = intercept;
    for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
    return z;
}

inline double linear_score(std::span<const double> x, const LogregModel& model) {
    return linear_score(x, model.weights, model.intercept);
}

namespace logreg_detail {

inline void check_shapes(std::span<const double> weights, const Matrix& X,
                         std::span<const int> y, double lambda) {
    if (weights.size() != X.cols()) {
        throw std::invalid_argument("logreg: weight length " + std::to_string(weights.size()) +
                                    " does not match feature count " + std::to_string(X.cols()));
    }
    if (y.size() != X.rows()) {
        throw std::invalid_argument("logreg: label count does not match row count");
    }
    if (lambda < 0.0) throw std::invalid_argument("logreg: lambda must be >= 0");
}

inline double penalty_value(std::span<const double> weights, const PenaltySpec& penalty,
                            double lambda) {
    double l1 = 0.0, l2 = 0.0;
    for (double w : weights) {
        l1 += std::abs(w);
        l2 += w * w;
    }
    switch (penalty.kind) {
        case Penalty::none: return 0.0;
        case Penalty::lasso: return 0.5 * lambda * l1;
        case Penalty::ridge: return 0.5 * lambda * l2;
        case Penalty::elastic_net:
            return lambda * (penalty.mix * l1 + 0.5 * (1.0 - penalty.mix) * l2);
    }
    return 0.0;
}

// Subgradient of the penalty, with sign(0) = 0 for the L1 part.
inline void add_penalty_gradient(std::span<const double> weights, const PenaltySpec& penalty,
                                 double lambda, std::span<double> grad) {
    auto sign = [](double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); };
    switch (penalty.kind) {
        case Penalty::none:
            break;
        case Penalty::lasso:
            for (std::size_t j = 0; j < weights.size(); ++j) {
                grad[j] += 0.5 * lambda * sign(weights[j]);
            }
            break;
        case Penalty::ridge:
            for (std::size_t j = 0; j < weights.size(); ++j) grad[j] += lambda * weights[j];
            break;
        case Penalty::elastic_net:
            for (std::size_t j = 0; j < weights.size(); ++j) {
                grad[j] += lambda * (penalty.mix * sign(weights[j]) +
                                     (1.0 - penalty.mix) * weights[j]);
            }
            break;
    }
}

} // namespace logreg_detail

/**
 * @brief Penalized objective value.
 *
 * log_likelihood: sum_i [softplus(z_i) - y_i z_i], the Bernoulli negative
 * log-likelihood. squared_error: 1/2 sum_i (sigmoid(z_i) - y_i)^2, the
 * literal squared-error-on-probabilities form, kept for fidelity checks
 * (it is non-convex through the sigmoid and not used for fitting by
 * default). The penalty adds on top; the intercept is excluded from it.
 */
inline double objective(std::span<const double> weights, double intercept, const Matrix& X,
                        std::span<const int> y, const PenaltySpec& penalty, double lambda,
                        DataTerm data_term = DataTerm::log_likelihood) {
    logreg_detail::check_shapes(weights, X, y, lambda);
    double data = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double z = linear_score(X.row(i), weights, intercept);
        if (data_term == DataTerm::log_likelihood) {
            data += softplus(z) - (y[i] ? z : 0.0);
        } else {
            const double r = sigmoid(z) - static_cast<double>(y[i]);
            data += 0.5 * r * r;
        }
    }
    return data + logreg_detail::penalty_value(weights, penalty, lambda);
}

struct Gradient {
    std::vector<double> weights;
    double intercept = 0.0;
};

/// Analytic gradient of `objective` (subgradient for the L1 part, with
/// sign(0) = 0). Matches central finite differences away from kinks.
inline Gradient gradient(std::span<const double> weights, double intercept, const Matrix& X,
                         std::span<const int> y, const PenaltySpec& penalty, double lambda,
                         DataTerm data_term = DataTerm::log_likelihood) {
    logreg_detail::check_shapes(weights, X, y, lambda);
    Gradient g;
    g.weights.assign(weights.size(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto row = X.row(i);
        const double p = sigmoid(linear_score(row, weights, intercept));
        const double resid = p - static_cast<double>(y[i]);
        // d(data)/dz: NLL gives (p - y); squared error chains through the
        // sigmoid derivative p(1-p).
        const double dz =
            data_term == DataTerm::log_likelihood ? resid : resid * p * (1.0 - p);
        for (std::size_t j = 0; j < row.size(); ++j) g.weights[j] += dz * row[j];
        g.intercept += dz;
    }
    logreg_detail::add_penalty_gradient(weights, penalty, lambda, g.weights);
    return g;
}

/**
 * @brief Full-batch gradient descent with backtracking line search.
 *
 * Starts from zero weights (deterministic), halves the step until the
 * Armijo condition f(w - t g) <= f(w) - 1e-4 t |g|^2 holds, and stops when
 * the relative objective change drops below the tolerance or the iteration
 * budget runs out. With a fixed learning_rate the same halving guard kicks
 * in only if a step would increase the objective, so the recorded trace is
 * non-increasing either way. For L1 penalties, coefficients within 1e-6 of
 * zero are snapped to exactly zero at the end so the regularization path
 * reports exact sparsity.
 */
inline LogregModel fit(const Matrix& X, std::span<const int> y, const PenaltySpec& penalty,
                       double lambda, const FitConfig& config = {}) {
    config.validate();
    if (X.rows() < 2) throw std::invalid_argument("fit: need at least 2 rows");
    logreg_detail::check_shapes(std::vector<double>(X.cols(), 0.0), X, y, lambda);
    for (double v : X.data()) {
        if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite value in X");
    }
    bool has0 = false, has1 = false;
    for (int label : y) {
        if (label == 0) has0 = true;
        else if (label == 1) has1 = true;
        else throw std::invalid_argument("fit: labels must be 0 or 1");
    }
    if (!has0 || !has1) throw std::invalid_argument("fit: both classes must be present");

    LogregModel model;
    model.penalty = penalty;
    model.lambda = lambda;
    model.weights.assign(X.cols(), 0.0);
    model.intercept = 0.0;

    const double armijo = 1e-4;
    double f = objective(model.weights, model.intercept, X, y, penalty, lambda, config.data_term);
    model.trace.push_back({0, f});

    std::vector<double> candidate(X.cols());
    double warm_step = 1.0; // last accepted step, doubled: saves most halvings
    for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
        const Gradient g = gradient(model.weights, model.intercept, X, y, penalty, lambda,
                                    config.data_term);
        double grad_sq = g.intercept * g.intercept;
        for (double gj : g.weights) grad_sq += gj * gj;
        if (grad_sq == 0.0) {
            model.converged = true;
            break;
        }

        double step = config.learning_rate > 0.0 ? config.learning_rate : warm_step;
        double f_new = 0.0;
        double intercept_new = 0.0;
        bool accepted = false;
        for (int halving = 0; halving < 64; ++halving) {
            for (std::size_t j = 0; j < candidate.size(); ++j) {
                candidate[j] = model.weights[j] - step * g.weights[j];
            }
            intercept_new = model.intercept - step * g.intercept;
            f_new = objective(candidate, intercept_new, X, y, penalty, lambda, config.data_term);
            const bool ok = config.learning_rate > 0.0
                                ? f_new <= f // fixed step: only guard against ascent
                                : f_new <= f - armijo * step * grad_sq;
            if (ok) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // no descent direction representable at this scale
        if (config.learning_rate == 0.0) warm_step = std::min(step * 2.0, 1e6);

        model.weights = candidate;
        model.intercept = intercept_new;
        model.trace.push_back({iter, f_new});
        const double rel_change = std::abs(f - f_new) / std::max(1.0, std::abs(f));
        f = f_new;
        if (rel_change < config.tolerance) {
            model.converged = true;
            break;
        }
    }

    if (penalty.kind == Penalty::lasso || penalty.kind == Penalty::elastic_net) {
        for (double& w : model.weights) {
            if (std::abs(w) < 1e-6) w = 0.0;
        }
    }
    return model;
}

inline std::vector<double> predict_proba(const Matrix& X, const LogregModel& model) {
    if (X.cols() != model.weights.size()) {
        throw std::invalid_argument("predict_proba: feature count mismatch");
    }
    std::vector<double> probs;
    probs.reserve(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        probs.push_back(sigmoid(linear_score(X.row(i), model)));
    }
    return probs;
}

/// Hard labels: 1 iff probability >= threshold.
inline std::vector<int> predict(const Matrix& X, const LogregModel& model,
                                double threshold = 0.5) {
    const auto probs = predict_proba(X, model);
    std::vector<int> labels;
    labels.reserve(probs.size());
    for (double p : probs) labels.push_back(p >= threshold ? 1 : 0);
    return labels;
}

struct PathPoint {
    double C; // inverse regularization strength, lambda = 1/C
    std::vector<double> weights;
    double intercept = 0.0;
};

/**
 * @brief Coefficient paths over a grid of C = 1/lambda values.
 *
 * Each grid point is an independent zero-initialized fit, so the path is
 * reproducible point by point. C values must be positive and ascending.
 */
inline std::vector<PathPoint> regularization_path(const Matrix& X, std::span<const int> y,
                                                  const PenaltySpec& penalty,
                                                  const std::vector<double>& C_values,
                                                  const FitConfig& config = {}) {
    if (C_values.empty()) {
        throw std::invalid_argument("regularization_path: empty C grid");
    }
    for (std::size_t i = 0; i < C_values.size(); ++i) {
        if (!(C_values[i] > 0.0)) {
            throw std::invalid_argument("regularization_path: C values must be positive");
        }
        if (i > 0 && C_values[i] < C_values[i - 1]) {
            throw std::invalid_argument("regularization_path: C values must be sorted ascending");
        }
    }
    std::vector<PathPoint> path;
    path.reserve(C_values.size());
    for (double C : C_values) {
        auto model = fit(X, y, penalty, 1.0 / C, config);
        path.push_back({C, std::move(model.weights), model.intercept});
    }
    return path;
}

} // namespace sinistre
