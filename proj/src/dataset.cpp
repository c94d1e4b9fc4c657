#include "dao/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace dao {

namespace {

struct RowHash {
    const PointMatrix<double>* points;
    std::size_t operator()(Index row) const {
        std::uint64_t h = 1469598103934665603ULL;
        const double* data = points->row(row).data();
        const auto* bytes = reinterpret_cast<const unsigned char*>(data);
        for (std::size_t b = 0; b < sizeof(double) * static_cast<std::size_t>(points->cols()); ++b) {
            h = (h ^ bytes[b]) * 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

struct RowEqual {
    const PointMatrix<double>* points;
    bool operator()(Index a, Index b) const {
        return std::memcmp(points->row(a).data(), points->row(b).data(),
                           sizeof(double) * static_cast<std::size_t>(points->cols())) == 0;
    }
};

std::string trim(std::string_view s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) {
        ++lo;
    }
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) {
        --hi;
    }
    return std::string(s.substr(lo, hi - lo));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(const std::string& field) {
    if (field.empty()) {
        return std::nullopt;
    }
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        // from_chars rejects "inf"/"nan" spellings with a sign prefix on some
        // inputs; strtod gives a second chance so they are reported as
        // non-finite rather than non-numeric.
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end != field.c_str() + field.size()) {
            return std::nullopt;
        }
        return v;
    }
    return value;
}

void format_double(std::string& out, double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, ptr);
}

} // namespace

Dataset::Dataset(PointMatrix<double> points, std::optional<LabelVector> labels, std::string name,
                 std::optional<std::uint64_t> seed)
    : points_(std::move(points)), labels_(std::move(labels)), name_(std::move(name)), seed_(seed) {
    if (points_.rows() < 2) {
        throw DataError("dataset '" + name_ + "' needs at least 2 points, got " +
                        std::to_string(points_.rows()));
    }
    if (points_.cols() < 1) {
        throw DataError("dataset '" + name_ + "' has no feature columns");
    }
    for (Index i = 0; i < points_.rows(); ++i) {
        for (Index j = 0; j < points_.cols(); ++j) {
            if (!std::isfinite(points_(i, j))) {
                throw DataError("non-finite value at row " + std::to_string(i) + ", column " +
                                std::to_string(j));
            }
        }
    }
    std::unordered_set<Index, RowHash, RowEqual> seen(static_cast<std::size_t>(points_.rows()),
                                                      RowHash{&points_}, RowEqual{&points_});
    for (Index i = 0; i < points_.rows(); ++i) {
        if (!seen.insert(i).second) {
            throw DataError("dataset '" + name_ + "' contains duplicate row " + std::to_string(i));
        }
    }
    if (labels_) {
        if (labels_->size() != points_.rows()) {
            throw DataError("label vector length " + std::to_string(labels_->size()) +
                            " does not match n = " + std::to_string(points_.rows()));
        }
        if ((labels_->array() > 1).any()) {
            throw DataError("labels must be 0 or 1");
        }
        if ((labels_->array() == 1).all()) {
            throw DataError("labels contain no inlier");
        }
    }
}

std::uint64_t Dataset::content_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t size) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t b = 0; b < size; ++b) {
            h = (h ^ bytes[b]) * 1099511628211ULL;
        }
    };
    const std::uint64_t shape[2] = {static_cast<std::uint64_t>(points_.rows()),
                                    static_cast<std::uint64_t>(points_.cols())};
    mix(shape, sizeof(shape));
    mix(points_.data(), sizeof(double) * static_cast<std::size_t>(points_.size()));
    return h;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        rows.push_back(split_fields(line));
    }
    if (rows.empty()) {
        throw DataError("'" + path.string() + "' is empty");
    }

    const std::size_t width = rows.front().size();
    bool has_header = false;
    for (const auto& field : rows.front()) {
        if (!parse_double(field)) {
            has_header = true;
            break;
        }
    }

    std::vector<std::string> names;
    if (has_header) {
        names = rows.front();
    } else {
        for (std::size_t c = 0; c < width; ++c) {
            names.push_back("x" + std::to_string(c));
        }
    }

    std::optional<std::size_t> label_col;
    if (options.label_column) {
        const auto it = std::find(names.begin(), names.end(), *options.label_column);
        if (!has_header || it == names.end()) {
            throw DataError("label column '" + *options.label_column + "' not found in '" +
                            path.string() + "'");
        }
        label_col = static_cast<std::size_t>(it - names.begin());
    }

    const std::size_t first_data = has_header ? 1 : 0;
    const std::size_t n_raw = rows.size() - first_data;
    const std::size_t d = width - (label_col ? 1 : 0);
    if (d == 0) {
        throw DataError("'" + path.string() + "' has no feature columns");
    }

    PointMatrix<double> raw(static_cast<Index>(n_raw), static_cast<Index>(d));
    LabelVector raw_labels(static_cast<Index>(n_raw));
    for (std::size_t r = 0; r < n_raw; ++r) {
        const auto& fields = rows[first_data + r];
        if (fields.size() != width) {
            throw DataError("row " + std::to_string(r) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(width));
        }
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (label_col && c == *label_col) {
                if (fields[c] == options.outlier_token) {
                    raw_labels(static_cast<Index>(r)) = 1;
                } else if (fields[c] == options.inlier_token) {
                    raw_labels(static_cast<Index>(r)) = 0;
                } else {
                    throw DataError("invalid label '" + fields[c] + "' at row " + std::to_string(r));
                }
                continue;
            }
            const auto value = parse_double(fields[c]);
            if (!value) {
                throw DataError("non-numeric value '" + fields[c] + "' at row " + std::to_string(r) +
                                ", column " + std::to_string(out_col));
            }
            if (!std::isfinite(*value)) {
                throw DataError("non-finite value at row " + std::to_string(r) + ", column " +
                                std::to_string(out_col));
            }
            raw(static_cast<Index>(r), static_cast<Index>(out_col)) = *value;
            ++out_col;
        }
    }

    // First occurrence wins.
    std::vector<Index> keep;
    keep.reserve(n_raw);
    {
        std::unordered_set<Index, RowHash, RowEqual> seen(n_raw, RowHash{&raw}, RowEqual{&raw});
        for (Index i = 0; i < static_cast<Index>(n_raw); ++i) {
            if (seen.insert(i).second) {
                keep.push_back(i);
            }
        }
    }
    const std::size_t dropped = n_raw - keep.size();
    if (keep.size() < 2) {
        throw DataError("'" + path.string() + "' has fewer than 2 distinct rows after dropping " +
                        std::to_string(dropped) + " duplicates");
    }

    PointMatrix<double> points(static_cast<Index>(keep.size()), static_cast<Index>(d));
    LabelVector labels(static_cast<Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        points.row(static_cast<Index>(r)) = raw.row(keep[r]);
        labels(static_cast<Index>(r)) = raw_labels(keep[r]);
    }

    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < width; ++c) {
        if (!(label_col && c == *label_col)) {
            feature_names.push_back(names[c]);
        }
    }

    std::optional<LabelVector> maybe_labels;
    if (label_col) {
        maybe_labels = std::move(labels);
    }
    return LoadResult{Dataset(std::move(points), std::move(maybe_labels), path.stem().string()),
                      dropped, std::move(feature_names)};
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::string out;
    const auto& pts = dataset.points();
    for (Index c = 0; c < pts.cols(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += 'x';
        out += std::to_string(c);
    }
    if (dataset.labeled()) {
        out += ",label";
    }
    out += '\n';
    for (Index r = 0; r < pts.rows(); ++r) {
        for (Index c = 0; c < pts.cols(); ++c) {
            if (c > 0) {
                out += ',';
            }
            format_double(out, pts(r, c));
        }
        if (dataset.labeled()) {
            out += ',';
            out += static_cast<char>('0' + (*dataset.labels())(r));
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    file << out;
}

std::vector<double> feature_distinctness(const PointMatrix<double>& points) {
    std::vector<double> fractions;
    const auto n = static_cast<double>(points.rows());
    for (Index c = 0; c < points.cols(); ++c) {
        std::vector<double> column(points.col(c).begin(), points.col(c).end());
        std::sort(column.begin(), column.end());
        const auto distinct = std::unique(column.begin(), column.end()) - column.begin();
        fractions.push_back(static_cast<double>(distinct) / n);
    }
    return fractions;
}

bool lacks_continuous_feature(const Dataset& dataset) {
    const auto fractions = feature_distinctness(dataset);
    return std::none_of(fractions.begin(), fractions.end(),
                        [](double f) { return f >= kMinDistinctFraction; });
}

} // namespace dao
