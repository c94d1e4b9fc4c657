#ifndef DAO_DETECTORS_HPP
#define DAO_DETECTORS_HPP

#include "dao/lid.hpp"
#include "dao/neighbors.hpp"
#include "dao/parallel.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <string_view>

namespace dao {

enum class Detector { KNN, LOF, SLOF, DAO };

std::string_view to_string(Detector detector);
std::optional<Detector> parse_detector(std::string_view text);

// Raw per-point outlier scores, higher means more outlying.
template <typename Scalar>
struct BasicScoreVector {
    Detector detector;
    Index k;
    Vector<Scalar> scores;
    std::optional<LidEstimator> lid_estimator;

    Index size() const { return scores.size(); }
};

using ScoreVector = BasicScoreVector<double>;

// Distance to the k-th nearest neighbor.
template <typename Scalar>
BasicScoreVector<Scalar> score_knn(const BasicNeighborGraph<Scalar>& graph, Index k) {
    return {Detector::KNN, k, graph.kdists(k), std::nullopt};
}

// Simplified LOF: mean over the k nearest neighbors o of kdist(q) / kdist(o).
template <typename Scalar>
BasicScoreVector<Scalar> score_slof(const BasicNeighborGraph<Scalar>& graph, Index k) {
    const Vector<Scalar> kd = graph.kdists(k);
    const auto& idx = graph.indices();
    Vector<Scalar> scores(graph.size());
    parallel_for(0, graph.size(), [&](Index i) {
        Scalar sum = 0;
        for (Index j = 0; j < k; ++j) {
            sum += kd(i) / kd(idx(i, j));
        }
        scores(i) = sum / Scalar(k);
    });
    return {Detector::SLOF, k, std::move(scores), std::nullopt};
}

// Local outlier factor. Two passes: local reachability densities, then the
// mean ratio of neighbor density to own density.
template <typename Scalar>
BasicScoreVector<Scalar> score_lof(const BasicNeighborGraph<Scalar>& graph, Index k) {
    const Vector<Scalar> kd = graph.kdists(k);
    const auto& idx = graph.indices();
    const auto& dist = graph.distances();
    Vector<Scalar> lrd(graph.size());
    parallel_for(0, graph.size(), [&](Index i) {
        Scalar reach = 0;
        for (Index j = 0; j < k; ++j) {
            reach += std::max(kd(idx(i, j)), dist(i, j));
        }
        lrd(i) = Scalar(k) / reach;
    });
    Vector<Scalar> scores(graph.size());
    parallel_for(0, graph.size(), [&](Index i) {
        Scalar sum = 0;
        for (Index j = 0; j < k; ++j) {
            sum += lrd(idx(i, j));
        }
        scores(i) = sum / (Scalar(k) * lrd(i));
    });
    return {Detector::LOF, k, std::move(scores), std::nullopt};
}

// Dimensionality-aware outlier score: mean over the k nearest neighbors o of
// (kdist(q) / kdist(o)) ^ lid(o), with the exponent taken from the neighbor.
template <typename Scalar>
BasicScoreVector<Scalar> score_dao(const BasicNeighborGraph<Scalar>& graph, Index k,
                                   const BasicLidProfile<Scalar>& lids) {
    graph.check_k(k);
    if (lids.size() != graph.size()) {
        throw std::invalid_argument("LID profile has " + std::to_string(lids.size()) +
                                    " entries, graph has " + std::to_string(graph.size()));
    }
    const Vector<Scalar> log_kd = graph.kdists(k).array().log().matrix();
    const auto& idx = graph.indices();
    Vector<Scalar> scores(graph.size());
    parallel_for(0, graph.size(), [&](Index i) {
        thread_local Eigen::Array<Scalar, Eigen::Dynamic, 1> exponents;
        exponents.resize(k);
        for (Index j = 0; j < k; ++j) {
            const Index o = idx(i, j);
            exponents(j) = lids.ids(o) * (log_kd(i) - log_kd(o));
        }
        scores(i) = exponents.exp().sum() / Scalar(k);
    });
    return {Detector::DAO, k, std::move(scores), lids.estimator};
}

// DAO with a profile stored as plain values (ids must be finite and positive).
template <typename Scalar>
BasicScoreVector<Scalar> score_dao(const BasicNeighborGraph<Scalar>& graph, Index k,
                                   const Vector<Scalar>& ids) {
    if ((ids.array() <= 0).any() || !ids.allFinite()) {
        throw std::invalid_argument("DAO needs finite positive LID values");
    }
    BasicLidProfile<Scalar> profile{LidEstimator::MLE, 0, ids, ids.array().log().matrix()};
    auto out = score_dao(graph, k, profile);
    out.lid_estimator.reset();
    return out;
}

// Point index, score.
void write_scores_csv(const ScoreVector& scores, const std::filesystem::path& path);

} // namespace dao

#endif // DAO_DETECTORS_HPP
