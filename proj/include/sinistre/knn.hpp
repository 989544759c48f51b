#pragma once

// Exact k-nearest-neighbour classification over a contiguous row-major
// training matrix. The search is brute force by design: the standardized
// design matrix is ~40-dimensional, where space-partitioning trees degrade
// to linear scans anyway, and exactness is what the oracle tests demand.
// The batch kernel tiles training rows across query blocks so the hot data
// stays in cache; results are identical to the one-query-at-a-time path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sinistre/distance.hpp"
#include "sinistre/matrix.hpp"

namespace sinistre {

enum class VoteWeighting { uniform, inverse_distance };

/**
 * @brief A fitted nearest-neighbour classifier: the training data itself
 * plus the query-time hyperparameters.
 */
struct KnnModel {
    Matrix train;             // row-major training matrix
    std::vector<int> labels;  // binary, one per training row
    std::size_t k = 1;
    DistanceMetric metric = DistanceMetric::euclidean();
    VoteWeighting weighting = VoteWeighting::uniform;

    void validate() const {
        if (train.rows() == 0) throw std::invalid_argument("KnnModel: empty training matrix");
        if (labels.size() != train.rows()) {
            throw std::invalid_argument("KnnModel: label count does not match training rows");
        }
        if (k < 1 || k > train.rows()) {
            throw std::invalid_argument("KnnModel: k must be in [1, " +
                                        std::to_string(train.rows()) + "], got " +
                                        std::to_string(k));
        }
        if (metric.kind == DistanceMetric::Kind::minkowski && !(metric.order >= 1.0)) {
            throw std::invalid_argument("KnnModel: minkowski order must be >= 1");
        }
    }
};

struct Neighbor {
    std::size_t index;
    double distance;

    bool operator==(const Neighbor&) const = default;
};

/// Classification outcome for one query. `tie` records that the vote was
/// exactly split and the majority-class convention (label 0) decided.
struct Vote {
    int label = 0;
    double score = 0.0; // winning weight mass / total weight mass
    bool tie = false;
};

namespace knn_detail {

// Accumulation policies: `accumulate` folds one coordinate difference into
// a comparison value that is monotone in the true distance; `finalize`
// turns it into the distance itself. Selection happens on the raw
// accumulator so the Euclidean kernel never pays a sqrt per pair.

struct ManhattanAcc {
    static double accumulate(double acc, double diff) { return acc + std::abs(diff); }
    static double finalize(double acc, double) { return acc; }
};
struct EuclideanAcc {
    static double accumulate(double acc, double diff) { return acc + diff * diff; }
    static double finalize(double acc, double) { return std::sqrt(acc); }
};
struct ChebyshevAcc {
    static double accumulate(double acc, double diff) { return std::max(acc, std::abs(diff)); }
    static double finalize(double acc, double) { return acc; }
};
struct PowerAcc {
    static double accumulate_p(double acc, double diff, double order) {
        return acc + std::pow(std::abs(diff), order);
    }
    static double finalize(double acc, double order) { return std::pow(acc, 1.0 / order); }
};

/// Fixed-capacity max-heap of (value, index) pairs keeping the k smallest.
/// Lexicographic comparison implements the tie rule: equal values resolve
/// to the lower training index.
class BoundedNeighborHeap {
public:
    explicit BoundedNeighborHeap(std::size_t capacity) : capacity_(capacity) {
        heap_.reserve(capacity);
    }

    void push(double value, std::size_t index) {
        const std::pair<double, std::size_t> entry{value, index};
        if (heap_.size() < capacity_) {
            heap_.push_back(entry);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (entry < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = entry;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    bool full() const noexcept { return heap_.size() == capacity_; }
    double worst() const noexcept { return heap_.front().first; }

    /// Drains the heap into entries sorted ascending by (value, index).
    std::vector<std::pair<double, std::size_t>> take_sorted() {
        std::sort_heap(heap_.begin(), heap_.end());
        return std::move(heap_);
    }

private:
    std::size_t capacity_;
    std::vector<std::pair<double, std::size_t>> heap_;
};

template <typename Acc>
double accumulate_row(std::span<const double> q, std::span<const double> t, double /*order*/) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        acc = Acc::accumulate(acc, q[i] - t[i]);
    }
    return acc;
}

template <>
inline double accumulate_row<PowerAcc>(std::span<const double> q, std::span<const double> t,
                                       double order) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        acc = PowerAcc::accumulate_p(acc, q[i] - t[i], order);
    }
    return acc;
}

// Tile sizes for the batch kernel. A train tile of 512 rows x 64 columns
// of doubles is 256 KiB, comfortably inside L2 while a block of queries
// re-reads it.
inline constexpr std::size_t kTrainTile = 512;

template <typename Acc>
void search_block(const Matrix& train, const Matrix& queries, std::size_t q_begin,
                  std::size_t q_end, std::size_t k, double order,
                  std::vector<std::vector<Neighbor>>& out) {
    const std::size_t nq = q_end - q_begin;
    std::vector<BoundedNeighborHeap> heaps;
    heaps.reserve(nq);
    for (std::size_t i = 0; i < nq; ++i) heaps.emplace_back(k);

    for (std::size_t t0 = 0; t0 < train.rows(); t0 += kTrainTile) {
        const std::size_t t1 = std::min(train.rows(), t0 + kTrainTile);
        for (std::size_t qi = 0; qi < nq; ++qi) {
            const auto q = queries.row(q_begin + qi);
            auto& heap = heaps[qi];
            for (std::size_t t = t0; t < t1; ++t) {
                heap.push(accumulate_row<Acc>(q, train.row(t), order), t);
            }
        }
    }

    for (std::size_t qi = 0; qi < nq; ++qi) {
        auto sorted = heaps[qi].take_sorted();
        auto& result = out[q_begin + qi];
        result.reserve(sorted.size());
        for (const auto& [value, index] : sorted) {
            result.push_back({index, Acc::finalize(value, order)});
        }
    }
}

inline void search_range(const KnnModel& model, const Matrix& queries, std::size_t q_begin,
                         std::size_t q_end, std::size_t k,
                         std::vector<std::vector<Neighbor>>& out) {
    if (model.metric.kind == DistanceMetric::Kind::chebyshev) {
        search_block<ChebyshevAcc>(model.train, queries, q_begin, q_end, k, 0.0, out);
    } else if (model.metric.order == 1.0) {
        search_block<ManhattanAcc>(model.train, queries, q_begin, q_end, k, 1.0, out);
    } else if (model.metric.order == 2.0) {
        search_block<EuclideanAcc>(model.train, queries, q_begin, q_end, k, 2.0, out);
    } else {
        search_block<PowerAcc>(model.train, queries, q_begin, q_end, k, model.metric.order, out);
    }
}

inline void check_query_dim(const KnnModel& model, std::size_t dim) {
    if (dim != model.train.cols()) {
        throw std::invalid_argument("knn: query dimension " + std::to_string(dim) +
                                    " does not match training dimension " +
                                    std::to_string(model.train.cols()));
    }
}

} // namespace knn_detail

/**
 * @brief Exact k nearest training rows for one query.
 *
 * Returns exactly k entries sorted ascending by distance; distance ties
 * resolve to the lower training index, so the result is a deterministic
 * function of the model and query.
 */
inline std::vector<Neighbor> find_k_nearest(std::span<const double> query, const KnnModel& model) {
    model.validate();
    knn_detail::check_query_dim(model, query.size());
    Matrix single(1, query.size());
    std::copy(query.begin(), query.end(), single.row(0).begin());
    std::vector<std::vector<Neighbor>> out(1);
    knn_detail::search_range(model, single, 0, 1, model.k, out);
    return std::move(out[0]);
}

/// Batch neighbour search used by predict and the k-sweep; queries are
/// partitioned across `threads` workers, output independent of the count.
inline std::vector<std::vector<Neighbor>> batch_find_k_nearest(const Matrix& queries,
                                                               const KnnModel& model,
                                                               std::size_t k,
                                                               unsigned threads = 1) {
    model.validate();
    if (queries.rows() == 0) return {};
    knn_detail::check_query_dim(model, queries.cols());
    if (k < 1 || k > model.train.rows()) {
        throw std::invalid_argument("knn: k out of range");
    }

    std::vector<std::vector<Neighbor>> out(queries.rows());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(queries.rows())));
    if (workers == 1) {
        knn_detail::search_range(model, queries, 0, queries.rows(), k, out);
        return out;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (queries.rows() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        const std::size_t end = std::min(queries.rows(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            knn_detail::search_range(model, queries, begin, end, k, out);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

/**
 * @brief Turns a sorted neighbour list into a vote.
 *
 * Uniform weighting is a majority vote; inverse-distance weights each
 * neighbour by 1/d. Neighbours at distance zero would get infinite weight,
 * so when any are present they vote exclusively with equal weight. An
 * exactly split vote resolves to label 0 (the majority class) and is
 * flagged in the result.
 */
inline Vote vote_from_neighbors(std::span<const Neighbor> neighbors,
                                std::span<const int> train_labels, VoteWeighting weighting) {
    if (neighbors.empty()) {
        throw std::invalid_argument("vote_from_neighbors: empty neighbour list");
    }
    double mass[2] = {0.0, 0.0};
    if (weighting == VoteWeighting::inverse_distance && neighbors.front().distance == 0.0) {
        for (const auto& nb : neighbors) {
            if (nb.distance == 0.0) mass[train_labels[nb.index] ? 1 : 0] += 1.0;
        }
    } else {
        for (const auto& nb : neighbors) {
            const double w =
                weighting == VoteWeighting::uniform ? 1.0 : 1.0 / nb.distance;
            mass[train_labels[nb.index] ? 1 : 0] += w;
        }
    }
    Vote vote;
    vote.tie = (mass[0] == mass[1]);
    vote.label = mass[1] > mass[0] ? 1 : 0;
    const double total = mass[0] + mass[1];
    vote.score = total > 0.0 ? mass[vote.label] / total : 0.0;
    return vote;
}

inline Vote predict_one(std::span<const double> query, const KnnModel& model) {
    const auto neighbors = find_k_nearest(query, model);
    return vote_from_neighbors(neighbors, model.labels, model.weighting);
}

/// Row-wise prediction. Results are byte-identical for any thread count.
inline std::vector<int> predict(const Matrix& queries, const KnnModel& model,
                                unsigned threads = 1) {
    const auto neighbor_lists = batch_find_k_nearest(queries, model, model.k, threads);
    std::vector<int> labels;
    labels.reserve(neighbor_lists.size());
    for (const auto& nbs : neighbor_lists) {
        labels.push_back(vote_from_neighbors(nbs, model.labels, model.weighting).label);
    }
    return labels;
}

struct KSweepPoint {
    std::size_t k;
    double train_accuracy;
    double test_accuracy;
};

namespace knn_detail {

inline double vote_accuracy(const std::vector<std::vector<Neighbor>>& neighbor_lists,
                            std::span<const int> train_labels, std::span<const int> truth,
                            std::size_t k, VoteWeighting weighting) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < neighbor_lists.size(); ++i) {
        const auto& nbs = neighbor_lists[i];
        const std::span<const Neighbor> first_k(nbs.data(), std::min(k, nbs.size()));
        if (vote_from_neighbors(first_k, train_labels, weighting).label == truth[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(neighbor_lists.size());
}

} // namespace knn_detail

/**
 * @brief Train/test accuracy across a grid of k values.
 *
 * Neighbour lists are computed once at the largest k; the prefix of a
 * sorted neighbour list at length k is exactly the k-nearest set under the
 * same tie rule, so each grid point reuses the one search.
 */
inline std::vector<KSweepPoint> accuracy_vs_k_sweep(
    const Matrix& train, const std::vector<int>& train_labels, const Matrix& test,
    const std::vector<int>& test_labels, const std::vector<std::size_t>& k_values,
    DistanceMetric metric, VoteWeighting weighting, unsigned threads = 1) {
    if (k_values.empty()) {
        throw std::invalid_argument("accuracy_vs_k_sweep: empty k grid");
    }
    KnnModel model{train, train_labels, 1, metric, weighting};
    const std::size_t k_max = *std::max_element(k_values.begin(), k_values.end());
    model.k = k_max; // validate() rejects k_max beyond the training size
    model.validate();

    const auto train_neighbors = batch_find_k_nearest(train, model, k_max, threads);
    const auto test_neighbors = batch_find_k_nearest(test, model, k_max, threads);

    std::vector<KSweepPoint> points;
    points.reserve(k_values.size());
    for (const std::size_t k : k_values) {
        if (k < 1 || k > train.rows()) {
            throw std::invalid_argument("accuracy_vs_k_sweep: k=" + std::to_string(k) +
                                        " out of range");
        }
        points.push_back(
            {k,
             knn_detail::vote_accuracy(train_neighbors, model.labels, train_labels, k, weighting),
             knn_detail::vote_accuracy(test_neighbors, model.labels, test_labels, k, weighting)});
    }
    return points;
}

} // namespace sinistre
