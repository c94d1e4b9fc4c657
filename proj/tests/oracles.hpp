// Slow, direct reference computations used only by the tests.
#ifndef DAO_TESTS_ORACLES_HPP
#define DAO_TESTS_ORACLES_HPP

#include "dao/dataset.hpp"
#include "dao/rng.hpp"
#include "dao/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace dao::oracle {

inline double distance(const PointMatrix<double>& p, Index a, Index b) {
    double s = 0;
    for (Index c = 0; c < p.cols(); ++c) {
        s += (p(a, c) - p(b, c)) * (p(a, c) - p(b, c));
    }
    return std::sqrt(s);
}

// Full sort of all other points by (distance, index).
inline std::vector<std::pair<double, Index>> sorted_neighbors(const PointMatrix<double>& p, Index i) {
    std::vector<std::pair<double, Index>> out;
    for (Index j = 0; j < p.rows(); ++j) {
        if (j != i) {
            out.emplace_back(distance(p, i, j), j);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<double> knn_scores(const PointMatrix<double>& p, Index k) {
    std::vector<double> out;
    for (Index i = 0; i < p.rows(); ++i) {
        out.push_back(sorted_neighbors(p, i)[static_cast<std::size_t>(k - 1)].first);
    }
    return out;
}

// Textbook LOF, recomputing every neighborhood from scratch.
inline std::vector<double> lof_scores(const PointMatrix<double>& p, Index k) {
    const Index n = p.rows();
    std::vector<std::vector<std::pair<double, Index>>> nn(static_cast<std::size_t>(n));
    std::vector<double> kd(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        auto all = sorted_neighbors(p, i);
        all.resize(static_cast<std::size_t>(k));
        kd[static_cast<std::size_t>(i)] = all.back().first;
        nn[static_cast<std::size_t>(i)] = std::move(all);
    }
    std::vector<double> lrd(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        double reach = 0;
        for (const auto& [d, j] : nn[static_cast<std::size_t>(i)]) {
            reach += std::max(kd[static_cast<std::size_t>(j)], d);
        }
        lrd[static_cast<std::size_t>(i)] = 1.0 / (reach / static_cast<double>(k));
    }
    std::vector<double> out;
    for (Index i = 0; i < n; ++i) {
        double s = 0;
        for (const auto& [d, j] : nn[static_cast<std::size_t>(i)]) {
            s += lrd[static_cast<std::size_t>(j)] / lrd[static_cast<std::size_t>(i)];
        }
        out.push_back(s / static_cast<double>(k));
    }
    return out;
}

// All positive/negative pairs, ties counted half.
inline double auc_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0;
    double pairs = 0;
    for (std::size_t a = 0; a < scores.size(); ++a) {
        if (labels[a] != 1) {
            continue;
        }
        for (std::size_t b = 0; b < scores.size(); ++b) {
            if (labels[b] != 0) {
                continue;
            }
            pairs += 1;
            wins += scores[a] > scores[b] ? 1.0 : (scores[a] == scores[b] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

inline double dispersion_pairs(const std::vector<double>& x) {
    double s = 0;
    const auto n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            s += std::abs(x[i] - x[j]);
        }
    }
    return 2.0 * s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Chi-square CDF by composite Simpson quadrature of the density.
inline double chi2_cdf_quadrature(int dof, double x, int intervals = 200000) {
    const double half = 0.5 * dof;
    const double log_norm = -half * std::log(2.0) - std::lgamma(half);
    const auto pdf = [&](double t) {
        if (t <= 0) {
            return dof == 2 ? 0.5 : 0.0;
        }
        return std::exp(log_norm + (half - 1) * std::log(t) - 0.5 * t);
    };
    const double h = x / intervals;
    double s = pdf(0) + pdf(x);
    for (int i = 1; i < intervals; ++i) {
        s += pdf(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

inline PointMatrix<double> uniform_points(Index n, Index d, std::uint64_t seed, double lo = 0, double hi = 1) {
    Rng rng(seed);
    PointMatrix<double> p(n, d);
    for (Index i = 0; i < n; ++i) {
        for (Index c = 0; c < d; ++c) {
            p(i, c) = rng.uniform(lo, hi);
        }
    }
    return p;
}

// Uniform sample from the unit m-ball (Gaussian direction, radius u^(1/m)).
inline PointMatrix<double> ball_points(Index n, Index m, std::uint64_t seed) {
    Rng rng(seed);
    PointMatrix<double> p(n, m);
    for (Index i = 0; i < n; ++i) {
        double norm = 0;
        for (Index c = 0; c < m; ++c) {
            p(i, c) = rng.gaussian();
            norm += p(i, c) * p(i, c);
        }
        const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
        p.row(i) *= radius / std::sqrt(norm);
    }
    return p;
}

inline LabelVector random_labels(Index n, double rate, std::uint64_t seed) {
    Rng rng(seed);
    LabelVector l(n);
    for (Index i = 0; i < n; ++i) {
        l(i) = rng.uniform() < rate ? 1 : 0;
    }
    l(0) = 1;
    l(n - 1) = 0;
    return l;
}

} // namespace dao::oracle

#endif // DAO_TESTS_ORACLES_HPP
