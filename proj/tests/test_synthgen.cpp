#include "dao/synthgen.hpp"

#include "dao/special.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

using namespace dao;

namespace {

SynthSpec spec_with(int dim_c2, std::uint64_t seed) {
    SynthSpec s;
    s.dim_c2 = dim_c2;
    s.seed = seed;
    return s;
}

// Undo the rotation: emitted = translated * Q, so translated = emitted * Q^T.
Eigen::MatrixXd translated_frame(const SynthDataset& s) {
    return s.dataset.points() * s.report.truth.rotation.transpose();
}

} // namespace

TEST(Synth, SeededDeterminism) {
    const auto a = generate(spec_with(8, 42));
    const auto b = generate(spec_with(8, 42));
    EXPECT_EQ(a.dataset.points(), b.dataset.points());
    EXPECT_EQ(*a.dataset.labels(), *b.dataset.labels());
    EXPECT_EQ(a.dataset.name(), "synth_c1-8_c2-8_s42");
    EXPECT_NE(generate(spec_with(8, 43)).dataset.points(), a.dataset.points());
}

TEST(Synth, ShapeAndOutlierFraction) {
    for (const int dim : {2, 8, 32}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto s = generate(spec_with(dim, seed));
            EXPECT_EQ(s.dataset.size(), 1600);
            EXPECT_EQ(s.dataset.dim(), 32);
            for (const int count : {s.report.outliers_c1, s.report.outliers_c2}) {
                EXPECT_GE(count, 16) << "dim " << dim << " seed " << seed;
                EXPECT_LE(count, 72) << "dim " << dim << " seed " << seed;
            }
            EXPECT_EQ(s.dataset.labels()->cast<int>().sum(), s.report.outliers_c1 + s.report.outliers_c2);
        }
    }
}

TEST(Synth, RotationIsAnIsometry) {
    const auto s = generate(spec_with(5, 7));
    const Eigen::MatrixXd& q = s.report.truth.rotation;
    EXPECT_TRUE((q.transpose() * q).isIdentity(1e-12));
    const Eigen::MatrixXd pre = translated_frame(s);
    const auto& post = s.dataset.points();
    for (Index i = 0; i < 1600; i += 37) {
        for (Index j = i + 1; j < 1600; j += 53) {
            EXPECT_NEAR((pre.row(i) - pre.row(j)).norm(), (post.row(i) - post.row(j)).norm(), 1e-9);
        }
    }
}

TEST(Synth, SubspacesAreSortedAndDistinct) {
    const auto s = generate(spec_with(12, 3));
    for (const auto* sub : {&s.report.truth.subspace_c1, &s.report.truth.subspace_c2}) {
        EXPECT_TRUE(std::is_sorted(sub->begin(), sub->end()));
        EXPECT_EQ(std::set<int>(sub->begin(), sub->end()).size(), sub->size());
        EXPECT_GE(sub->front(), 0);
        EXPECT_LT(sub->back(), 32);
    }
    EXPECT_EQ(s.report.truth.subspace_c1.size(), 8u);
    EXPECT_EQ(s.report.truth.subspace_c2.size(), 12u);
}

TEST(Synth, LabelsReproducedInRotatedFrame) {
    const auto s = generate(spec_with(20, 11));
    const auto& t = s.report.truth;
    const Eigen::MatrixXd& q = t.rotation;
    const auto& x = s.dataset.points();
    const double q1 = chi2_quantile(8, 0.95);
    const double q2 = chi2_quantile(20, 0.95);
    for (Index i = 0; i < 1600; ++i) {
        const bool first = i < 800;
        const auto& sub = first ? t.subspace_c1 : t.subspace_c2;
        const Eigen::RowVectorXd centre = (first ? t.translation_c1 : t.translation_c2).transpose() * q;
        double m2 = 0;
        for (const int c : sub) {
            const double proj = (x.row(i) - centre).dot(q.row(c));
            m2 += proj * proj;
        }
        EXPECT_EQ((*s.dataset.labels())(i), m2 > (first ? q1 : q2) ? 1 : 0) << "row " << i;
    }
}

TEST(Synth, NoPointInsideBothRejectionShells) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto s = generate(spec_with(32, seed));
        const auto& t = s.report.truth;
        const Eigen::MatrixXd pre = translated_frame(s);
        const double r1 = chi2_quantile(8, 0.99999);
        const double r2 = chi2_quantile(32, 0.99999);
        for (Index i = 0; i < pre.rows(); ++i) {
            const Eigen::VectorXd p = pre.row(i).transpose();
            EXPECT_FALSE(subspace_mahalanobis2(p, t.translation_c1, t.subspace_c1) < r1 &&
                         subspace_mahalanobis2(p, t.translation_c2, t.subspace_c2) < r2);
        }
    }
}

TEST(Synth, ClusterMeansNearCentres) {
    const auto s = generate(spec_with(16, 21));
    const auto& t = s.report.truth;
    const Eigen::MatrixXd pre = translated_frame(s);
    const double tol = 5.0 / std::sqrt(800.0);
    for (int c = 0; c < 2; ++c) {
        const auto& sub = c == 0 ? t.subspace_c1 : t.subspace_c2;
        const Eigen::VectorXd& centre = c == 0 ? t.translation_c1 : t.translation_c2;
        const Eigen::RowVectorXd mean = pre.middleRows(c * 800, 800).colwise().mean();
        for (Index j = 0; j < 32; ++j) {
            const bool inside = std::find(sub.begin(), sub.end(), static_cast<int>(j)) != sub.end();
            if (inside) {
                EXPECT_NEAR(mean(j), centre(j), tol);
            } else {
                EXPECT_NEAR(mean(j), centre(j), 1e-9);
            }
        }
    }
}

TEST(Synth, SpecValidation) {
    EXPECT_THROW(generate(spec_with(33, 1)), std::invalid_argument);
    EXPECT_THROW(generate(spec_with(0, 1)), std::invalid_argument);
    SynthSpec s;
    s.outlier_quantile = 1.0;
    EXPECT_THROW(generate(s), std::invalid_argument);
}

TEST(Synth, OrthonormalBasisFixesSigns) {
    Eigen::MatrixXd m(3, 3);
    m << 2, -1, 0, 1, 3, 1, 0, 1, -4;
    const auto q = orthonormal_basis(m);
    const Eigen::MatrixXd r = q.transpose() * m;
    EXPECT_TRUE((q.transpose() * q).isIdentity(1e-14));
    for (Index i = 0; i < 3; ++i) {
        EXPECT_GT(r(i, i), 0.0);
        for (Index j = 0; j < i; ++j) {
            EXPECT_NEAR(r(i, j), 0.0, 1e-12);
        }
    }
}

TEST(Synth, SubspaceMahalanobisIgnoresComplement) {
    Eigen::VectorXd x(4);
    x << 1, 100, 2, -50;
    EXPECT_DOUBLE_EQ(subspace_mahalanobis2(x, Eigen::VectorXd::Zero(4), {0, 2}), 5.0);
}

TEST(Suite, CountsSeedsAndOrder) {
    const auto suite = benchmark_suite(2, {4, 8, 30}, 100);
    ASSERT_EQ(suite.size(), 6u);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        EXPECT_EQ(suite[i].report.seed, 100 + i);
        EXPECT_EQ(suite[i].spec.dim_c2, (std::vector<int>{4, 8, 30})[i % 3]);
    }
    EXPECT_EQ(suite[4].dataset.points(), generate(spec_with(8, 104)).dataset.points());
    const auto ref = benchmark_suite(1, {8}, 5);
    ASSERT_EQ(ref.size(), 1u);
    EXPECT_EQ(ref[0].spec.dim_c1, 8);
    EXPECT_EQ(ref[0].spec.dim_c2, 8);
}

TEST(Suite, DefaultTemplatesAndErrors) {
    const auto dims = default_dims_c2();
    ASSERT_EQ(dims.size(), 16u);
    EXPECT_EQ(dims.front(), 2);
    EXPECT_EQ(dims.back(), 32);
    EXPECT_THROW(benchmark_suite(0, {8}, 1), std::invalid_argument);
    EXPECT_THROW(benchmark_suite(1, {1}, 1), std::invalid_argument);
    EXPECT_THROW(benchmark_suite(1, {}, 1), std::invalid_argument);
}

TEST(Suite, WritesCsvAndSidecar) {
    const auto dir = std::filesystem::temp_directory_path() / "dao_synth_write";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    SynthSpec small;
    small.cluster_size = 60;
    small.dim_c2 = 4;
    small.seed = 9;
    const auto s = generate(small);
    write_synth(s, dir);
    const auto csv = dir / (s.dataset.name() + ".csv");
    ASSERT_TRUE(std::filesystem::exists(csv));
    const auto side = read_sidecar(csv);
    ASSERT_TRUE(side.has_value());
    EXPECT_EQ(side->dim_c1, 8);
    EXPECT_EQ(side->dim_c2, 4);
    EXPECT_EQ(side->seed, 9u);
    const auto loaded = load_csv(csv, CsvOptions{"label"});
    EXPECT_EQ(loaded.dataset.points(), s.dataset.points());
    EXPECT_EQ(*loaded.dataset.labels(), *s.dataset.labels());
    std::filesystem::remove_all(dir);
}
