#ifndef DAO_METRICS_HPP
#define DAO_METRICS_HPP

#include "dao/neighbors.hpp"
#include "dao/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace dao {

// Mann-Whitney U / (#pos * #neg); tied scores earn half credit.
template <typename DerivedS, typename DerivedL>
double roc_auc(const Eigen::DenseBase<DerivedS>& scores, const Eigen::DenseBase<DerivedL>& labels) {
    const Index n = scores.size();
    if (labels.size() != n) {
        throw std::invalid_argument("scores and labels differ in length");
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a) < scores(b); });
    double positives = 0;
    double rank_sum = 0;  // 1-based average ranks of positives
    for (Index lo = 0; lo < n;) {
        Index hi = lo + 1;
        while (hi < n && scores(order[static_cast<std::size_t>(hi)]) == scores(order[static_cast<std::size_t>(lo)])) {
            ++hi;
        }
        const double avg_rank = 0.5 * static_cast<double>(lo + 1 + hi);
        for (Index p = lo; p < hi; ++p) {
            if (labels(order[static_cast<std::size_t>(p)]) != 0) {
                positives += 1;
                rank_sum += avg_rank;
            }
        }
        lo = hi;
    }
    const double negatives = static_cast<double>(n) - positives;
    if (positives == 0 || negatives == 0) {
        throw std::invalid_argument("ROC AUC needs both outlier and inlier labels");
    }
    const double u = rank_sum - positives * (positives + 1) / 2;
    return u / (positives * negatives);
}

// Mean absolute pairwise difference of log LID values,
// 2 / (n (n - 1)) * sum_{i<j} |x_i - x_j|, via a sorted prefix formula.
template <typename Derived>
double dispersion_R(const Eigen::DenseBase<Derived>& log_ids) {
    const Index n = log_ids.size();
    if (n < 2) {
        throw std::invalid_argument("dispersion needs at least 2 values");
    }
    std::vector<double> sorted(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        sorted[static_cast<std::size_t>(i)] = static_cast<double>(log_ids(i));
    }
    std::sort(sorted.begin(), sorted.end());
    // Offsets from the minimum keep equal values at exactly zero and limit
    // cancellation in the weighted sum.
    const double base = sorted.front();
    double sum = 0;
    for (Index j = 0; j < n; ++j) {
        sum += (sorted[static_cast<std::size_t>(j)] - base) * static_cast<double>(2 * j - n + 1);
    }
    return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

namespace detail {
template <typename Derived>
Vector<double> centered_or_throw(const Eigen::DenseBase<Derived>& values) {
    const Index n = values.size();
    bool constant = true;
    for (Index i = 1; i < n && constant; ++i) {
        constant = values(i) == values(0);
    }
    if (n < 2 || constant) {
        throw std::invalid_argument("Moran's I undefined for zero-variance values");
    }
    Vector<double> z = values.template cast<double>();
    z.array() -= z.mean();
    return z;
}
} // namespace detail

// Global Moran's I with row-normalized binary k-NN weights (w_ij = 1/k for j in
// NN_k(i)), so that the total weight equals n.
template <typename Derived, typename Scalar>
double morans_I(const Eigen::DenseBase<Derived>& values, const BasicNeighborGraph<Scalar>& graph, Index k) {
    graph.check_k(k);
    if (values.size() != graph.size()) {
        throw std::invalid_argument("values and graph differ in length");
    }
    const Vector<double> z = detail::centered_or_throw(values);
    const auto& idx = graph.indices();
    double cross = 0;
    for (Index i = 0; i < z.size(); ++i) {
        double lag = 0;
        for (Index j = 0; j < k; ++j) {
            lag += z(idx(i, j));
        }
        cross += z(i) * lag / static_cast<double>(k);
    }
    return cross / z.squaredNorm();
}

struct MoranResult {
    double I;
    Index k;
};

// Evaluates every k in [k_lo, k_hi] and keeps the largest |I|; ties go to the
// smallest k.
template <typename Derived, typename Scalar>
MoranResult morans_I_maxmag(const Eigen::DenseBase<Derived>& values, const BasicNeighborGraph<Scalar>& graph,
                            Index k_lo, Index k_hi) {
    graph.check_k(k_lo);
    graph.check_k(k_hi);
    if (k_lo > k_hi) {
        throw std::invalid_argument("empty Moran's I k range");
    }
    if (values.size() != graph.size()) {
        throw std::invalid_argument("values and graph differ in length");
    }
    const Vector<double> z = detail::centered_or_throw(values);
    const double denom = z.squaredNorm();
    const auto& idx = graph.indices();
    Vector<double> lag_sum = Vector<double>::Zero(z.size());
    MoranResult best{0.0, 0};
    for (Index k = 1; k <= k_hi; ++k) {
        for (Index i = 0; i < z.size(); ++i) {
            lag_sum(i) += z(idx(i, k - 1));
        }
        if (k < k_lo) {
            continue;
        }
        const double I = z.dot(lag_sum) / static_cast<double>(k) / denom;
        if (best.k == 0 || std::abs(I) > std::abs(best.I)) {
            best = {I, k};
        }
    }
    return best;
}

} // namespace dao

#endif // DAO_METRICS_HPP
