#include "dao/synthgen.hpp"

#include "dao/parallel.hpp"
#include "dao/rng.hpp"
#include "dao/special.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dao {

namespace {

std::vector<int> random_subspace(Rng& rng, int ambient, int dim) {
    std::vector<int> coords(static_cast<std::size_t>(ambient));
    std::iota(coords.begin(), coords.end(), 0);
    for (int i = 0; i < dim; ++i) {
        const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(ambient - i)));
        std::swap(coords[static_cast<std::size_t>(i)], coords[static_cast<std::size_t>(j)]);
    }
    coords.resize(static_cast<std::size_t>(dim));
    std::sort(coords.begin(), coords.end());
    return coords;
}

} // namespace

void SynthSpec::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid synthetic spec: " + what); };
    if (ambient_dim < 1) {
        fail("ambient_dim must be >= 1");
    }
    if (dim_c1 < 1 || dim_c1 > ambient_dim || dim_c2 < 1 || dim_c2 > ambient_dim) {
        fail("cluster dimensions must lie in [1, " + std::to_string(ambient_dim) + "]");
    }
    if (cluster_size < 2) {
        fail("cluster_size must be >= 2");
    }
    if (!(outlier_quantile > 0 && outlier_quantile < 1 && reject_quantile > 0 && reject_quantile < 1)) {
        fail("quantiles must lie in (0, 1)");
    }
    if (!(reject_quantile > outlier_quantile)) {
        fail("reject_quantile must exceed outlier_quantile");
    }
    if (!(translation_lo < translation_hi)) {
        fail("empty translation range");
    }
    if (retry_cap < 1) {
        fail("retry_cap must be >= 1");
    }
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < q.cols(); ++c) {
        if (r(c, c) < 0) {
            q.col(c) = -q.col(c);
        }
    }
    return q;
}

double subspace_mahalanobis2(const Eigen::VectorXd& point, const Eigen::VectorXd& center,
                             const std::vector<int>& subspace) {
    double sum = 0;
    for (const int c : subspace) {
        const double diff = point(c) - center(c);
        sum += diff * diff;
    }
    return sum;
}

SynthDataset generate(const SynthSpec& spec) {
    spec.validate();
    const int d = spec.ambient_dim;
    const int m = spec.cluster_size;
    const double label_q1 = chi2_quantile(spec.dim_c1, spec.outlier_quantile);
    const double label_q2 = chi2_quantile(spec.dim_c2, spec.outlier_quantile);
    const double reject_q1 = chi2_quantile(spec.dim_c1, spec.reject_quantile);
    const double reject_q2 = chi2_quantile(spec.dim_c2, spec.reject_quantile);

    Rng rng(spec.seed);
    GenReport report;
    report.seed = spec.seed;

    Eigen::MatrixXd cloud(2 * m, d);  // column j = coordinate j, row = point
    LabelVector labels(2 * m);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= spec.retry_cap) {
            throw DataError("synthetic generation with seed " + std::to_string(spec.seed) +
                            " exceeded " + std::to_string(spec.retry_cap) + " overlap rejections");
        }
        cloud.setZero();
        report.outliers_c1 = 0;
        report.outliers_c2 = 0;
        SynthTruth truth;
        truth.subspace_c1 = random_subspace(rng, d, spec.dim_c1);
        truth.subspace_c2 = random_subspace(rng, d, spec.dim_c2);

        for (int c = 0; c < 2; ++c) {
            const auto& subspace = c == 0 ? truth.subspace_c1 : truth.subspace_c2;
            const double threshold = c == 0 ? label_q1 : label_q2;
            for (int p = 0; p < m; ++p) {
                const Index row = c * m + p;
                double norm2 = 0;
                for (const int coord : subspace) {
                    const double z = rng.gaussian();
                    cloud(row, coord) = z;
                    norm2 += z * z;
                }
                const bool outlier = norm2 > threshold;
                labels(row) = outlier ? 1 : 0;
                (c == 0 ? report.outliers_c1 : report.outliers_c2) += outlier ? 1 : 0;
            }
        }

        truth.translation_c1.resize(d);
        truth.translation_c2.resize(d);
        for (int j = 0; j < d; ++j) {
            truth.translation_c1(j) = rng.uniform(spec.translation_lo, spec.translation_hi);
        }
        for (int j = 0; j < d; ++j) {
            truth.translation_c2(j) = rng.uniform(spec.translation_lo, spec.translation_hi);
        }
        cloud.topRows(m).rowwise() += truth.translation_c1.transpose();
        cloud.bottomRows(m).rowwise() += truth.translation_c2.transpose();

        bool overlap = false;
        for (Index row = 0; row < 2 * m && !overlap; ++row) {
            const Eigen::VectorXd x = cloud.row(row).transpose();
            overlap = subspace_mahalanobis2(x, truth.translation_c1, truth.subspace_c1) < reject_q1 &&
                      subspace_mahalanobis2(x, truth.translation_c2, truth.subspace_c2) < reject_q2;
        }
        if (overlap) {
            ++report.rejections;
            continue;
        }

        Eigen::MatrixXd raw(d, d);
        for (Index r = 0; r < d; ++r) {
            for (Index c = 0; c < d; ++c) {
                raw(r, c) = rng.uniform(-1.0, 1.0);
            }
        }
        truth.rotation = orthonormal_basis(raw);
        report.truth = std::move(truth);
        break;
    }

    PointMatrix<double> points = cloud * report.truth.rotation;
    std::ostringstream name;
    name << "synth_c1-" << spec.dim_c1 << "_c2-" << spec.dim_c2 << "_s" << spec.seed;
    Dataset dataset(std::move(points), std::move(labels), name.str(), spec.seed);
    return SynthDataset{std::move(dataset), std::move(report), spec};
}

std::vector<int> default_dims_c2() {
    std::vector<int> dims;
    for (int v = 2; v <= 32; v += 2) {
        dims.push_back(v);
    }
    return dims;
}

std::vector<SynthDataset> benchmark_suite(int reps, const std::vector<int>& dims_c2,
                                          std::uint64_t seed0, const SynthSpec& base) {
    if (reps < 1) {
        throw std::invalid_argument("benchmark suite needs reps >= 1");
    }
    if (dims_c2.empty()) {
        throw std::invalid_argument("benchmark suite needs at least one cluster-2 dimension");
    }
    for (const int dim : dims_c2) {
        if (dim < 2 || dim > base.ambient_dim) {
            throw std::invalid_argument("cluster-2 dimension " + std::to_string(dim) + " outside [2, " +
                                        std::to_string(base.ambient_dim) + "]");
        }
    }
    const auto total = static_cast<std::ptrdiff_t>(reps) * static_cast<std::ptrdiff_t>(dims_c2.size());
    std::vector<std::optional<SynthDataset>> slots(static_cast<std::size_t>(total));
    parallel_for(0, total, [&](std::ptrdiff_t index) {
        SynthSpec spec = base;
        spec.dim_c2 = dims_c2[static_cast<std::size_t>(index) % dims_c2.size()];
        spec.seed = seed0 + static_cast<std::uint64_t>(index);
        slots[static_cast<std::size_t>(index)] = generate(spec);
    });
    std::vector<SynthDataset> out;
    out.reserve(slots.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

void write_synth(const SynthDataset& synth, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& name = synth.dataset.name();
    write_csv(synth.dataset, dir / (name + ".csv"));
    const auto& s = synth.spec;
    nlohmann::ordered_json j;
    j["name"] = name;
    j["seed"] = synth.report.seed;
    j["generator"] = {{"ambient_dim", s.ambient_dim},
                      {"cluster_size", s.cluster_size},
                      {"dim_c1", s.dim_c1},
                      {"dim_c2", s.dim_c2},
                      {"outlier_quantile", s.outlier_quantile},
                      {"reject_quantile", s.reject_quantile},
                      {"translation_range", {s.translation_lo, s.translation_hi}},
                      {"retry_cap", s.retry_cap},
                      {"gaussian", "box-muller"},
                      {"rng", "mt19937_64"}};
    j["rejections"] = synth.report.rejections;
    j["outliers_c1"] = synth.report.outliers_c1;
    j["outliers_c2"] = synth.report.outliers_c2;
    j["subspace_c1"] = synth.report.truth.subspace_c1;
    j["subspace_c2"] = synth.report.truth.subspace_c2;
    std::ofstream out(dir / (name + ".json"), std::ios::binary);
    if (!out) {
        throw DataError("cannot write sidecar for '" + name + "'");
    }
    out << j.dump(2) << '\n';
}

std::optional<SynthSidecar> read_sidecar(const std::filesystem::path& csv_path) {
    auto json_path = csv_path;
    json_path.replace_extension(".json");
    std::ifstream in(json_path);
    if (!in) {
        return std::nullopt;
    }
    try {
        const auto j = nlohmann::json::parse(in);
        SynthSidecar out;
        out.dim_c1 = j.at("generator").at("dim_c1").get<int>();
        out.dim_c2 = j.at("generator").at("dim_c2").get<int>();
        out.seed = j.at("seed").get<std::uint64_t>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed sidecar '" + json_path.string() + "': " + e.what());
    }
}

} // namespace dao
