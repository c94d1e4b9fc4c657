#ifndef DAO_LID_HPP
#define DAO_LID_HPP

#include "dao/neighbors.hpp"
#include "dao/parallel.hpp"
#include "dao/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dao {

enum class LidEstimator { MLE, TwoNN, TLE };

std::string_view to_string(LidEstimator estimator);
std::optional<LidEstimator> parse_lid_estimator(std::string_view text);

// Estimates are clamped into [floor, cap] so that DAO exponents stay finite on
// degenerate neighborhoods. The cap scales with the embedding dimension.
template <typename Scalar>
struct LidBounds {
    Scalar floor = Scalar(0.05);
    Scalar cap = std::numeric_limits<Scalar>::max();

    static LidBounds for_dimension(Index dim) { return {Scalar(0.05), Scalar(4) * Scalar(dim)}; }

    Scalar clamp(Scalar id) const {
        if (std::isnan(id)) {
            return cap;
        }
        return std::clamp(id, floor, cap);
    }
};

template <typename Scalar>
struct BasicLidProfile {
    LidEstimator estimator;
    Index k_used;
    Vector<Scalar> ids;
    Vector<Scalar> log_ids;

    Index size() const { return ids.size(); }
};

using LidProfile = BasicLidProfile<double>;

// Neighborhood sizes swept for every estimator, truncated to k <= n - 1.
inline std::vector<Index> estimator_k_grid(Index n) {
    static constexpr std::array<Index, 12> kGrid{5, 10, 15, 30, 50, 90, 150, 260, 320, 450, 560, 780};
    std::vector<Index> grid;
    for (const Index k : kGrid) {
        if (k <= n - 1) {
            grid.push_back(k);
        }
    }
    return grid;
}

template <typename Scalar>
BasicLidProfile<Scalar> make_lid_profile(LidEstimator estimator, Index k, Vector<Scalar> ids,
                                         const LidBounds<Scalar>& bounds) {
    Vector<Scalar> logs(ids.size());
    for (Index i = 0; i < ids.size(); ++i) {
        ids(i) = bounds.clamp(ids(i));
        logs(i) = std::log(ids(i));
    }
    return {estimator, k, std::move(ids), std::move(logs)};
}

// Hill / Levina-Bickel maximum likelihood estimate over the k nearest
// neighbors: -(1/k * sum_j ln(d_j / d_k))^-1. The j = k term is zero and is
// kept in the average.
template <typename Scalar>
BasicLidProfile<Scalar> estimate_mle(const BasicNeighborGraph<Scalar>& graph, Index k,
                                     const LidBounds<Scalar>& bounds) {
    if (k < 2 || k > graph.kmax()) {
        throw std::out_of_range("MLE needs 2 <= k <= kmax, got k = " + std::to_string(k));
    }
    const auto& dist = graph.distances();
    Vector<Scalar> ids(graph.size());
    parallel_for(0, graph.size(), [&](Index i) {
        // Both logs come from the same evaluation so equal distances give an
        // exactly zero term.
        const Eigen::Array<Scalar, Eigen::Dynamic, 1> logs = dist.row(i).head(k).transpose().array().log();
        const Scalar sum = (logs - logs(k - 1)).sum();
        ids(i) = sum < 0 ? -Scalar(k) / sum : std::numeric_limits<Scalar>::infinity();
    });
    return make_lid_profile(LidEstimator::MLE, k, std::move(ids), bounds);
}

// Two-nearest-neighbor estimate ln 2 / ln(mu), mu = d_2 / d_1, the inverse of
// the median of the Pareto law that mu follows. With pool = 0 every point uses
// only its own ratio; with pool = k the median ratio over the point and its k
// nearest neighbors is used instead, which tames the heavy upper tail of the
// single-ratio form.
template <typename Scalar>
BasicLidProfile<Scalar> estimate_twonn(const BasicNeighborGraph<Scalar>& graph,
                                       const LidBounds<Scalar>& bounds, Index pool = 0) {
    if (graph.kmax() < 2) {
        throw std::out_of_range("TwoNN needs kmax >= 2");
    }
    if (pool < 0 || pool > graph.kmax()) {
        throw std::out_of_range("TwoNN pool size " + std::to_string(pool) + " outside [0, kmax]");
    }
    const auto& dist = graph.distances();
    const auto& idx = graph.indices();
    Vector<Scalar> ratios = (dist.col(1).array() / dist.col(0).array()).matrix();
    Vector<Scalar> ids(graph.size());
    parallel_for(0, graph.size(), [&](Index i) {
        Scalar mu = ratios(i);
        if (pool > 0) {
            thread_local std::vector<Scalar> sample;
            sample.clear();
            sample.push_back(ratios(i));
            for (Index j = 0; j < pool; ++j) {
                sample.push_back(ratios(static_cast<Index>(idx(i, j))));
            }
            const auto mid = sample.begin() + static_cast<std::ptrdiff_t>(sample.size() / 2);
            std::nth_element(sample.begin(), mid, sample.end());
            mu = *mid;
            if (sample.size() % 2 == 0) {
                mu = (mu + *std::max_element(sample.begin(), mid)) / 2;
            }
        }
        const Scalar log_mu = std::log(mu);
        ids(i) = log_mu > 0 ? std::numbers::ln2_v<Scalar> / log_mu
                            : std::numeric_limits<Scalar>::infinity();
    });
    return make_lid_profile(LidEstimator::TwoNN, pool, std::move(ids), bounds);
}

// Tight local estimation: pools the k neighbor distances with two distance
// measurements derived from every neighbor pair inside the k-NN ball.
template <typename Scalar>
BasicLidProfile<Scalar> estimate_tle(const BasicNeighborGraph<Scalar>& graph,
                                     const PointMatrix<Scalar>& points, Index k,
                                     const LidBounds<Scalar>& bounds, Scalar epsilon = Scalar(1e-4)) {
    if (k < 2 || k > graph.kmax()) {
        throw std::out_of_range("TLE needs 2 <= k <= kmax, got k = " + std::to_string(k));
    }
    if (points.rows() != graph.size()) {
        throw std::invalid_argument("TLE: point count does not match the neighbor graph");
    }
    const auto& dist = graph.distances();
    const auto& idx = graph.indices();
    Vector<Scalar> ids(graph.size());
    parallel_for(0, graph.size(), [&](Index q) {
        const Scalar r = dist(q, k - 1);
        const Scalar r2 = r * r;
        Scalar sum_pairs = 0;
        Index dropped = 0;
        for (Index a = 0; a < k; ++a) {
            const Scalar ua = dist(q, a);
            const Scalar ua2 = ua * ua;
            const bool on_boundary = ua == r;
            for (Index b = 0; b < k; ++b) {
                if (a == b) {
                    continue;
                }
                const Scalar ub = dist(q, b);
                const Scalar ub2 = ub * ub;
                const Scalar v = euclidean(points.row(idx(q, a)), points.row(idx(q, b)));
                const Scalar v2 = v * v;
                const Scalar z2 = 2 * ua2 + 2 * ub2 - v2;
                Scalar s;
                Scalar t;
                if (v == 0) {
                    ++dropped;
                    continue;
                } else if (ua == 0) {
                    s = ub;
                    t = ub;
                } else if (ub == 0) {
                    s = t = r * v / (r + v);
                } else if (on_boundary) {
                    s = r * v2 / (r2 + v2 - ub2);
                    t = r * z2 / (r2 + z2 - ub2);
                } else {
                    const Scalar denom = 2 * (r2 - ua2);
                    const Scalar bs = ua2 + v2 - ub2;
                    const Scalar bt = ua2 + z2 - ub2;
                    s = r * (std::sqrt(std::max(Scalar(0), bs * bs + 4 * v2 * (r2 - ua2))) - bs) / denom;
                    t = r * (std::sqrt(std::max(Scalar(0), bt * bt + 4 * z2 * (r2 - ua2))) - bt) / denom;
                }
                if (!(s >= epsilon) || !(t >= epsilon)) {
                    ++dropped;
                    continue;
                }
                sum_pairs += std::log(s / r) + std::log(t / r);
            }
        }
        Scalar sum_dists = 0;
        Index small = 0;
        for (Index j = 0; j < k; ++j) {
            if (dist(q, j) < epsilon) {
                ++small;
                continue;
            }
            sum_dists += std::log(dist(q, j) / r);
        }
        const Scalar denom = sum_pairs + 2 * sum_dists;
        const Scalar count = Scalar(k * k - dropped - small);
        ids(q) = denom < 0 ? -2 * count / denom : std::numeric_limits<Scalar>::infinity();
    });
    return make_lid_profile(LidEstimator::TLE, k, std::move(ids), bounds);
}

template <typename Scalar>
BasicLidProfile<Scalar> estimate_lid(LidEstimator estimator, const BasicNeighborGraph<Scalar>& graph,
                                     const PointMatrix<Scalar>& points, Index k) {
    const auto bounds = LidBounds<Scalar>::for_dimension(points.cols());
    switch (estimator) {
    case LidEstimator::MLE:
        return estimate_mle(graph, k, bounds);
    case LidEstimator::TwoNN:
        return estimate_twonn(graph, bounds, k);
    case LidEstimator::TLE:
        return estimate_tle(graph, points, k, bounds);
    }
    throw std::invalid_argument("unknown LID estimator");
}

// Point index, estimate, log estimate.
void write_lid_csv(const LidProfile& profile, const std::filesystem::path& path);

} // namespace dao

#endif // DAO_LID_HPP
