#include "dao/harness.hpp"

#include "dao/metrics.hpp"
#include "dao/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace dao {

std::vector<Index> LidConfig::grid_for(Index n, Index kmax) const {
    std::vector<Index> grid = k_grid.empty() ? estimator_k_grid(n) : k_grid;
    std::erase_if(grid, [&](Index k) { return k > kmax || k > n - 1 || k < 2; });
    return grid;
}

std::vector<Index> k_range(Index lo, Index hi, Index step) {
    if (step < 1) {
        throw std::invalid_argument("k range step must be positive");
    }
    std::vector<Index> out;
    for (Index k = lo; k <= hi; k += step) {
        out.push_back(k);
    }
    return out;
}

AucPoint select_best(std::span<const AucPoint> profile) {
    if (profile.empty()) {
        throw std::invalid_argument("empty AUC profile");
    }
    AucPoint best = profile.front();
    for (const auto& p : profile.subspan(1)) {
        if (p.auc > best.auc || (p.auc == best.auc && (p.k < best.k || (p.k == best.k && p.lid_k < best.lid_k)))) {
            best = p;
        }
    }
    return best;
}

ScoreVector score_detector(const NeighborGraph& graph, Detector detector, Index k, const LidProfile* lids) {
    switch (detector) {
    case Detector::KNN:
        return score_knn(graph, k);
    case Detector::LOF:
        return score_lof(graph, k);
    case Detector::SLOF:
        return score_slof(graph, k);
    case Detector::DAO:
        if (lids == nullptr) {
            throw std::invalid_argument("DAO needs a LID profile");
        }
        return score_dao(graph, k, *lids);
    }
    throw std::invalid_argument("unknown detector");
}

namespace {

void check_ks(std::span<const Index> ks, const NeighborGraph& graph, Index n) {
    if (ks.empty()) {
        throw std::invalid_argument("empty k range");
    }
    for (const Index k : ks) {
        if (k < 1 || k > n - 1) {
            throw std::out_of_range("k = " + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
        }
        graph.check_k(k);
    }
}

const LabelVector& require_labels(const Dataset& dataset) {
    if (!dataset.labeled()) {
        throw DataError("dataset '" + dataset.name() + "' has no labels");
    }
    return *dataset.labels();
}

std::vector<LidProfile> grid_profiles(const NeighborGraph& graph, const Dataset& dataset,
                                      const LidConfig& lid, const std::vector<Index>& grid) {
    std::vector<std::optional<LidProfile>> slots(grid.size());
    parallel_for(0, static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t g) {
        slots[static_cast<std::size_t>(g)] =
            estimate_lid(lid.estimator, graph, dataset.points(), grid[static_cast<std::size_t>(g)]);
    });
    std::vector<LidProfile> out;
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

struct DaoSweep {
    SweepResult result;
    std::vector<LidProfile> profiles;
    std::vector<Index> grid;
};

DaoSweep sweep_dao(const NeighborGraph& graph, const Dataset& dataset, std::span<const Index> ks,
                   const LidConfig& lid) {
    const auto& labels = require_labels(dataset);
    check_ks(ks, graph, dataset.size());
    DaoSweep out;
    out.grid = lid.grid_for(dataset.size(), graph.kmax());
    if (out.grid.empty()) {
        throw std::invalid_argument("no LID neighborhood size fits the dataset");
    }
    out.profiles = grid_profiles(graph, dataset, lid, out.grid);
    const auto pairs = static_cast<std::ptrdiff_t>(ks.size() * out.grid.size());
    std::vector<AucPoint> profile(static_cast<std::size_t>(pairs));
    parallel_for(0, pairs, [&](std::ptrdiff_t p) {
        const auto ki = static_cast<std::size_t>(p) / out.grid.size();
        const auto gi = static_cast<std::size_t>(p) % out.grid.size();
        const auto scores = score_dao(graph, ks[ki], out.profiles[gi]);
        profile[static_cast<std::size_t>(p)] = {ks[ki], out.grid[gi], roc_auc(scores.scores, labels)};
    });
    out.result.detector = Detector::DAO;
    out.result.lid_estimator = lid.estimator;
    out.result.best = select_best(profile);
    out.result.profile = std::move(profile);
    return out;
}

} // namespace

SweepResult sweep_detector(const NeighborGraph& graph, const Dataset& dataset, Detector detector,
                           std::span<const Index> ks, const LidConfig& lid) {
    if (detector == Detector::DAO) {
        return sweep_dao(graph, dataset, ks, lid).result;
    }
    const auto& labels = require_labels(dataset);
    check_ks(ks, graph, dataset.size());
    std::vector<AucPoint> profile(ks.size());
    parallel_for(0, static_cast<std::ptrdiff_t>(ks.size()), [&](std::ptrdiff_t i) {
        const Index k = ks[static_cast<std::size_t>(i)];
        const auto scores = score_detector(graph, detector, k);
        profile[static_cast<std::size_t>(i)] = {k, 0, roc_auc(scores.scores, labels)};
    });
    SweepResult result;
    result.detector = detector;
    result.best = select_best(profile);
    result.profile = std::move(profile);
    return result;
}

SweepResult best_k_sweep(const Dataset& dataset, Detector detector, std::span<const Index> ks,
                         const LidConfig& lid) {
    require_labels(dataset);
    if (ks.empty()) {
        throw std::invalid_argument("empty k range");
    }
    Index kmax = *std::max_element(ks.begin(), ks.end());
    if (kmax > dataset.size() - 1) {
        throw std::out_of_range("k = " + std::to_string(kmax) + " outside [1, " +
                                std::to_string(dataset.size() - 1) + "]");
    }
    if (detector == Detector::DAO) {
        const auto grid = lid.grid_for(dataset.size(), dataset.size() - 1);
        if (!grid.empty()) {
            kmax = std::max(kmax, grid.back());
        }
        kmax = std::max<Index>(kmax, 2);
    }
    const auto graph = build_neighbor_graph(dataset, std::min(kmax, dataset.size() - 1));
    return sweep_detector(graph, dataset, detector, ks, lid);
}

Index required_kmax(const Dataset& dataset, const SweepConfig& config) {
    const Index n = dataset.size();
    Index kmax = 2;
    for (const Index k : config.detector_ks) {
        kmax = std::max(kmax, k);
    }
    const bool dao = std::find(config.detectors.begin(), config.detectors.end(), Detector::DAO) !=
                     config.detectors.end();
    if (dao) {
        for (const Index k : config.lid.grid_for(n, n - 1)) {
            kmax = std::max(kmax, k);
        }
        kmax = std::max(kmax, config.moran_k_hi);
    }
    return std::min(kmax, n - 1);
}

std::size_t truncate_to_dataset(SweepConfig& config, Index n) {
    const auto before = config.detector_ks.size() + config.lid.k_grid.size();
    std::erase_if(config.detector_ks, [n](Index k) { return k > n - 1; });
    std::erase_if(config.lid.k_grid, [n](Index k) { return k > n - 1; });
    return before - config.detector_ks.size() - config.lid.k_grid.size();
}

std::vector<EvalRecord> evaluate_dataset(const Dataset& dataset, const SweepConfig& config,
                                         const NeighborGraph& graph) {
    std::vector<EvalRecord> records;
    double dispersion = std::numeric_limits<double>::quiet_NaN();
    MoranResult moran{std::numeric_limits<double>::quiet_NaN(), 0};
    for (const Detector detector : config.detectors) {
        EvalRecord rec;
        rec.dataset = dataset.name();
        rec.detector = detector;
        SweepResult sweep;
        if (detector == Detector::DAO) {
            auto dao = sweep_dao(graph, dataset, config.detector_ks, config.lid);
            sweep = std::move(dao.result);
            const auto it = std::find(dao.grid.begin(), dao.grid.end(), sweep.best.lid_k);
            const auto& lids = dao.profiles[static_cast<std::size_t>(it - dao.grid.begin())];
            dispersion = dispersion_R(lids.log_ids);
            const Index lo = std::min(config.moran_k_lo, graph.kmax());
            const Index hi = std::min(config.moran_k_hi, graph.kmax());
            try {
                moran = morans_I_maxmag(lids.log_ids, graph, lo, hi);
            } catch (const std::invalid_argument&) {
                // Constant log-LID profile: autocorrelation undefined.
                moran = {std::numeric_limits<double>::quiet_NaN(), 0};
            }
        } else {
            sweep = sweep_detector(graph, dataset, detector, config.detector_ks, config.lid);
        }
        rec.lid_estimator = sweep.lid_estimator;
        rec.best_k = sweep.best.k;
        rec.lid_k = sweep.best.lid_k;
        rec.roc_auc = sweep.best.auc;
        records.push_back(std::move(rec));
    }
    for (auto& rec : records) {
        rec.dispersion_R = dispersion;
        rec.morans_I = moran.I;
        rec.morans_k = moran.k;
    }
    return records;
}

std::vector<EvalRecord> evaluate_dataset(const Dataset& dataset, const SweepConfig& config) {
    const auto graph = build_neighbor_graph(dataset, required_kmax(dataset, config));
    return evaluate_dataset(dataset, config, graph);
}

MeanStd time_detector(const NeighborGraph& graph, const Dataset& dataset, Detector detector,
                      std::span<const Index> ks, const LidConfig& lid, TimingOptions options) {
    using Clock = std::chrono::steady_clock;
    const auto& labels = require_labels(dataset);
    check_ks(ks, graph, dataset.size());
    const auto seconds = [](Clock::duration d) { return std::chrono::duration<double>(d).count(); };
    std::vector<double> samples;
    volatile double sink = 0;
    for (int rep = 0; rep < std::max(1, options.repeats); ++rep) {
        if (detector != Detector::DAO) {
            for (const Index k : ks) {
                const auto t0 = Clock::now();
                const auto scores = score_detector(graph, detector, k);
                sink = sink + roc_auc(scores.scores, labels);
                samples.push_back(seconds(Clock::now() - t0));
            }
            continue;
        }
        for (const Index lid_k : lid.grid_for(dataset.size(), graph.kmax())) {
            const auto t0 = Clock::now();
            const auto profile = estimate_lid(lid.estimator, graph, dataset.points(), lid_k);
            const double share = seconds(Clock::now() - t0) / static_cast<double>(ks.size());
            for (const Index k : ks) {
                const auto t1 = Clock::now();
                const auto scores = score_dao(graph, k, profile);
                sink = sink + roc_auc(scores.scores, labels);
                samples.push_back(seconds(Clock::now() - t1) + share);
            }
        }
    }
    return mean_std(samples);
}

} // namespace dao
