#ifndef DAO_DATASET_HPP
#define DAO_DATASET_HPP

#include "dao/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dao {

enum class DistanceKind { Euclidean };

// Points in R^d, one per row. Immutable once constructed; the constructor
// enforces the invariants (n >= 2, d >= 1, finite, no duplicate rows, labels
// sized n with at least one inlier).
class Dataset {
public:
    Dataset(PointMatrix<double> points, std::optional<LabelVector> labels, std::string name,
            std::optional<std::uint64_t> seed = std::nullopt);

    const PointMatrix<double>& points() const { return points_; }
    const std::optional<LabelVector>& labels() const { return labels_; }
    const std::string& name() const { return name_; }
    std::optional<std::uint64_t> seed() const { return seed_; }

    Index size() const { return points_.rows(); }
    Index dim() const { return points_.cols(); }
    bool labeled() const { return labels_.has_value(); }

    // FNV-1a over shape and raw coordinate bytes; keys the neighbor cache.
    std::uint64_t content_hash() const;

private:
    PointMatrix<double> points_;
    std::optional<LabelVector> labels_;
    std::string name_;
    std::optional<std::uint64_t> seed_;
};

struct CsvOptions {
    std::optional<std::string> label_column;
    std::string outlier_token = "1";
    std::string inlier_token = "0";
};

struct LoadResult {
    Dataset dataset;
    std::size_t duplicates_dropped = 0;
    std::vector<std::string> column_names;
};

// Comma-separated, optional header row, '.' decimal separator. Exact duplicate
// rows are dropped keeping the first occurrence (and its label).
LoadResult load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Writes the coordinates (shortest round-trip formatting) and, when present, a
// trailing `label` column. Always writes a header row.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// Per column: number of distinct values divided by n.
std::vector<double> feature_distinctness(const PointMatrix<double>& points);
inline std::vector<double> feature_distinctness(const Dataset& dataset) {
    return feature_distinctness(dataset.points());
}

inline constexpr double kMinDistinctFraction = 0.20;

// True when no column reaches kMinDistinctFraction distinct values.
bool lacks_continuous_feature(const Dataset& dataset);

} // namespace dao

#endif // DAO_DATASET_HPP
