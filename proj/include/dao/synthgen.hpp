#ifndef DAO_SYNTHGEN_HPP
#define DAO_SYNTHGEN_HPP

#include "dao/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace dao {

// Two Gaussian clusters living in random axis-aligned subspaces of R^ambient,
// labeled by chi-square Mahalanobis shells, then moved to general position.
struct SynthSpec {
    int ambient_dim = 32;
    int cluster_size = 800;
    int dim_c1 = 8;
    int dim_c2 = 8;
    double outlier_quantile = 0.95;
    double reject_quantile = 0.99999;
    double translation_lo = -10.0;
    double translation_hi = 10.0;
    std::uint64_t seed = 0;
    int retry_cap = 1000;

    // Throws std::invalid_argument when the spec is unusable.
    void validate() const;
};

// Ground truth kept for inspection and testing. Points of cluster c occupy
// rows [c * cluster_size, (c + 1) * cluster_size).
struct SynthTruth {
    std::vector<int> subspace_c1;
    std::vector<int> subspace_c2;
    Eigen::VectorXd translation_c1;
    Eigen::VectorXd translation_c2;
    Eigen::MatrixXd rotation;  // emitted point = rotation^T * translated point
};

struct GenReport {
    int rejections = 0;
    int outliers_c1 = 0;
    int outliers_c2 = 0;
    std::uint64_t seed = 0;
    SynthTruth truth;
};

struct SynthDataset {
    Dataset dataset;
    GenReport report;
    SynthSpec spec;
};

SynthDataset generate(const SynthSpec& spec);

// Orthonormal factor of a Householder QR, with column signs flipped so the
// triangular factor has a positive diagonal.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m);

// Squared Mahalanobis distance of `point` to a cluster whose generating
// covariance is the identity on `subspace` (zero elsewhere), in the
// pseudo-inverse sense.
double subspace_mahalanobis2(const Eigen::VectorXd& point, const Eigen::VectorXd& center,
                             const std::vector<int>& subspace);

// reps * |dims_c2| datasets; dataset index = rep * |dims_c2| + position of the
// dimension, seeded with seed0 + index.
std::vector<SynthDataset> benchmark_suite(int reps, const std::vector<int>& dims_c2,
                                          std::uint64_t seed0, const SynthSpec& base = {});

// The 16 cluster-2 dimensions used by default: 2, 4, ..., 32.
std::vector<int> default_dims_c2();

// <dir>/<name>.csv plus <dir>/<name>.json holding spec, seed and counts.
void write_synth(const SynthDataset& synth, const std::filesystem::path& dir);

struct SynthSidecar {
    int dim_c1 = 0;
    int dim_c2 = 0;
    std::uint64_t seed = 0;
};

// Reads the cluster dimensions from the JSON sidecar next to a dataset CSV.
std::optional<SynthSidecar> read_sidecar(const std::filesystem::path& csv_path);

} // namespace dao

#endif // DAO_SYNTHGEN_HPP
