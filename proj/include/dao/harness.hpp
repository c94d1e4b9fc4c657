#ifndef DAO_HARNESS_HPP
#define DAO_HARNESS_HPP

#include "dao/dataset.hpp"
#include "dao/detectors.hpp"
#include "dao/lid.hpp"
#include "dao/neighbors.hpp"
#include "dao/stats.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dao {

struct LidConfig {
    LidEstimator estimator = LidEstimator::MLE;
    std::vector<Index> k_grid;  // empty: estimator_k_grid(n)

    std::vector<Index> grid_for(Index n, Index kmax) const;
};

// Inclusive integer range lo, lo + step, ..., <= hi.
std::vector<Index> k_range(Index lo, Index hi, Index step = 1);

struct SweepConfig {
    std::vector<Detector> detectors{Detector::KNN, Detector::LOF, Detector::SLOF, Detector::DAO};
    std::vector<Index> detector_ks = k_range(5, 100);
    LidConfig lid;
    Index moran_k_lo = 5;
    Index moran_k_hi = 100;
};

// One evaluated configuration; lid_k is 0 for detectors without LID.
struct AucPoint {
    Index k;
    Index lid_k;
    double auc;
};

// Highest AUC; ties go to the smallest k, then the smallest lid_k.
AucPoint select_best(std::span<const AucPoint> profile);

struct SweepResult {
    Detector detector;
    std::optional<LidEstimator> lid_estimator;
    AucPoint best;
    std::vector<AucPoint> profile;
};

ScoreVector score_detector(const NeighborGraph& graph, Detector detector, Index k,
                           const LidProfile* lids = nullptr);

// Evaluates the detector at every k (and, for DAO, every LID neighborhood size
// in the estimator grid) against the dataset labels.
SweepResult sweep_detector(const NeighborGraph& graph, const Dataset& dataset, Detector detector,
                           std::span<const Index> ks, const LidConfig& lid = {});

// Same, building its own neighbor graph.
SweepResult best_k_sweep(const Dataset& dataset, Detector detector, std::span<const Index> ks,
                         const LidConfig& lid = {});

struct EvalRecord {
    std::string dataset;
    Detector detector;
    std::optional<LidEstimator> lid_estimator;
    Index best_k = 0;
    Index lid_k = 0;
    double roc_auc = 0;
    double dispersion_R = 0;  // NaN when no LID profile was produced
    double morans_I = 0;
    Index morans_k = 0;
    std::optional<MeanStd> runtime_seconds;
    std::optional<int> dim_c1;
    std::optional<int> dim_c2;
};

// Neighbor graph capacity needed for every detector, estimator and Moran k.
Index required_kmax(const Dataset& dataset, const SweepConfig& config);

// Drops detector and estimator neighborhood sizes that do not fit n - 1;
// returns the number of values removed.
std::size_t truncate_to_dataset(SweepConfig& config, Index n);

// One record per requested detector. Dispersion and Moran's I describe the
// log-LID profile behind DAO's best configuration (NaN without DAO).
std::vector<EvalRecord> evaluate_dataset(const Dataset& dataset, const SweepConfig& config,
                                         const NeighborGraph& graph);

std::vector<EvalRecord> evaluate_dataset(const Dataset& dataset, const SweepConfig& config);

struct TimingOptions {
    int repeats = 1;
};

// Wall-clock seconds per run, where a run scores the dataset at one k and
// computes its ROC AUC. Graph construction is excluded. For DAO the time to
// estimate each grid profile is included, spread evenly across the runs that
// consume it.
MeanStd time_detector(const NeighborGraph& graph, const Dataset& dataset, Detector detector,
                      std::span<const Index> ks, const LidConfig& lid = {}, TimingOptions options = {});

} // namespace dao

#endif // DAO_HARNESS_HPP
