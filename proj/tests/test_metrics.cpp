#include "dao/metrics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <numeric>

using namespace dao;

namespace {

std::vector<int> as_ints(const LabelVector& labels) {
    return {labels.data(), labels.data() + labels.size()};
}

std::vector<double> as_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

NeighborGraph lattice_graph(Index n, Index kmax) {
    PointMatrix<double> p(n, 1);
    for (Index i = 0; i < n; ++i) {
        p(i, 0) = static_cast<double>(i);
    }
    return build_neighbor_graph(p, kmax, NeighborMethod::Brute);
}

} // namespace

TEST(RocAuc, Examples) {
    const Vector<double> s = (Vector<double>(4) << 1, 2, 3, 4).finished();
    const LabelVector l = (LabelVector(4) << 0, 0, 1, 1).finished();
    EXPECT_EQ(roc_auc(s, l), 1.0);
    EXPECT_EQ(roc_auc(Vector<double>::Constant(4, 0.3), l), 0.5);
    EXPECT_EQ(roc_auc(-s, l), 0.0);
}

TEST(RocAuc, NeedsBothClasses) {
    EXPECT_THROW(roc_auc(Vector<double>::Ones(3), LabelVector::Zero(3)), std::invalid_argument);
    EXPECT_THROW(roc_auc(Vector<double>::Ones(3), LabelVector::Zero(2)), std::invalid_argument);
}

TEST(RocAuc, MatchesPairwiseOracleWithTies) {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.below(60));
        Vector<double> s(n);
        for (Index i = 0; i < n; ++i) {
            s(i) = static_cast<double>(rng.below(8));
        }
        LabelVector l = oracle::random_labels(n, 0.3, 500 + static_cast<std::uint64_t>(trial));
        l(0) = 1;
        l(1) = 0;
        EXPECT_EQ(roc_auc(s, l), oracle::auc_pairs(as_std(s), as_ints(l)));
    }
}

TEST(RocAuc, AntisymmetryAndMonotoneInvariance) {
    Rng rng(7);
    Vector<double> s(80);
    for (Index i = 0; i < 80; ++i) {
        s(i) = std::round(rng.uniform(0, 20)) / 4;
    }
    auto l = oracle::random_labels(80, 0.2, 9);
    l(0) = 1;
    l(1) = 0;
    EXPECT_NEAR(roc_auc(s, l) + roc_auc(-s, l), 1.0, 1e-15);
    const Vector<double> warped = (s.array() * 3.0).exp().matrix();
    EXPECT_EQ(roc_auc(s, l), roc_auc(warped, l));
}

TEST(Dispersion, Examples) {
    EXPECT_EQ(dispersion_R(Vector<double>::Constant(10, 1.7)), 0.0);
    const Vector<double> two = (Vector<double>(2) << 1.0, 3.0).finished();
    EXPECT_NEAR(dispersion_R(two), 2.0, 1e-15);
    EXPECT_THROW(dispersion_R(Vector<double>::Ones(1)), std::invalid_argument);
}

TEST(Dispersion, MatchesPairwiseOracle) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.below(300));
        Vector<double> v(n);
        for (Index i = 0; i < n; ++i) {
            v(i) = std::log(rng.uniform(0.05, 40));
        }
        EXPECT_NEAR(dispersion_R(v), oracle::dispersion_pairs(as_std(v)), 1e-10);
    }
}

TEST(Moran, ConstantValuesAreAnError) {
    const auto g = lattice_graph(20, 4);
    EXPECT_THROW(morans_I(Vector<double>::Constant(20, 2.0), g, 2), std::invalid_argument);
    EXPECT_THROW(morans_I_maxmag(Vector<double>::Constant(20, 2.0), g, 1, 4), std::invalid_argument);
}

TEST(Moran, SmoothFieldIsPositivelyAutocorrelated) {
    const auto g = lattice_graph(50, 4);
    Vector<double> v(50);
    for (Index i = 0; i < 50; ++i) {
        v(i) = 0.1 * static_cast<double>(i);
    }
    EXPECT_GT(morans_I(v, g, 2), 0.8);
}

TEST(Moran, MatchesDirectEvaluation) {
    const auto p = oracle::uniform_points(60, 2, 8);
    const auto g = build_neighbor_graph(p, 6, NeighborMethod::Brute);
    Vector<double> v(60);
    Rng rng(2);
    for (Index i = 0; i < 60; ++i) {
        v(i) = rng.gaussian();
    }
    const double mean = v.mean();
    for (const Index k : {1, 3, 6}) {
        double num = 0;
        double den = 0;
        for (Index i = 0; i < 60; ++i) {
            den += (v(i) - mean) * (v(i) - mean);
            for (Index j = 0; j < k; ++j) {
                num += (v(i) - mean) * (v(g.indices()(i, j)) - mean) / static_cast<double>(k);
            }
        }
        EXPECT_NEAR(morans_I(v, g, k), num / den, 1e-12);
    }
}

TEST(Moran, PermutedValuesCentreOnNullExpectation) {
    const Index n = 200;
    const auto p = oracle::uniform_points(n, 2, 13);
    const auto g = build_neighbor_graph(p, 10, NeighborMethod::KdTree);
    Vector<double> v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = std::log(1.0 + p(i, 0) * 5.0);
    }
    Rng rng(77);
    std::vector<double> stats;
    for (int r = 0; r < 200; ++r) {
        for (Index i = n - 1; i > 0; --i) {
            std::swap(v(i), v(static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)))));
        }
        stats.push_back(morans_I(v, g, 10));
    }
    const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) / 200.0;
    double var = 0;
    for (const double s : stats) {
        var += (s - mean) * (s - mean);
    }
    const double se = std::sqrt(var / 199.0 / 200.0);
    EXPECT_LE(std::abs(mean + 1.0 / (n - 1)), 3 * se);
}

TEST(Moran, MaxMagnitudeMatchesExhaustiveSearch) {
    const auto p = oracle::uniform_points(80, 3, 5);
    const auto g = build_neighbor_graph(p, 20, NeighborMethod::Brute);
    Vector<double> v(80);
    for (Index i = 0; i < 80; ++i) {
        v(i) = p(i, 0) - 2 * p(i, 1);
    }
    const auto best = morans_I_maxmag(v, g, 3, 20);
    double expected = 0;
    Index expected_k = 0;
    for (Index k = 3; k <= 20; ++k) {
        const double I = morans_I(v, g, k);
        if (expected_k == 0 || std::abs(I) > std::abs(expected)) {
            expected = I;
            expected_k = k;
        }
    }
    EXPECT_EQ(best.k, expected_k);
    EXPECT_NEAR(best.I, expected, 1e-12);
    EXPECT_EQ(morans_I_maxmag(v, g, 7, 7).k, 7);
}

TEST(Moran, MaxMagnitudeFindsConstructedOptimum) {
    // Alternating values on a lattice: k = 2 sees only the opposite sign, so
    // the magnitude peaks there (I = -1) among k in {2, 4, 6}.
    const auto g = lattice_graph(40, 6);
    Vector<double> v(40);
    for (Index i = 0; i < 40; ++i) {
        v(i) = (i % 2 == 0) ? 1.0 : -1.0;
    }
    const auto best = morans_I_maxmag(v, g, 2, 6);
    EXPECT_EQ(best.k, 2);
    EXPECT_LT(best.I, -0.9);
}
