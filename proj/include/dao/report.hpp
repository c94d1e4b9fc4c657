#ifndef DAO_REPORT_HPP
#define DAO_REPORT_HPP

#include "dao/harness.hpp"
#include "dao/stats.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dao {

// Method label used in reports: "DAO_MLE" for DAO rows, the detector name
// otherwise.
std::string method_label(const EvalRecord& record);

void write_records(const std::vector<EvalRecord>& records, const std::filesystem::path& path);
std::vector<EvalRecord> read_records(const std::filesystem::path& path);

// dataset, method, runtime_mean, runtime_std for records that carry timings.
void write_timings(const std::vector<EvalRecord>& records, const std::filesystem::path& path);

struct Fig1Row {
    int dim_c2;
    std::string method;
    double mean;
    double std;
    std::size_t count;
};

// Mean and standard deviation of best-k AUC per (cluster-2 dimension, method).
std::vector<Fig1Row> fig1_table(const std::vector<EvalRecord>& records);

struct Fig2Point {
    std::string dataset;
    std::string competitor;
    double morans_I;
    double dispersion_R;
    double auc_difference;  // AUC(reference) - AUC(competitor)
};

// Scatter data comparing the reference method with every other method and
// with an oracle taking the best competitor per dataset.
std::vector<Fig2Point> fig2_points(const std::vector<EvalRecord>& records,
                                   const std::string& reference = "DAO_MLE");

struct RegressionRow {
    std::string pair;
    RegressionResult result;
};

// AUC(reference) - AUC(competitor) regressed on |dim_c1 - dim_c2|.
std::vector<RegressionRow> dimension_gap_regressions(const std::vector<EvalRecord>& records,
                                                     const std::string& reference = "DAO_MLE");

// AUC differences regressed on dispersion R and on Moran's I; pairs are named
// "<reference>:<competitor>~R" and "...~MoransI".
std::vector<RegressionRow> lid_profile_regressions(const std::vector<EvalRecord>& records,
                                                   const std::string& reference = "DAO_MLE");

struct RankReport {
    std::vector<std::string> methods;
    RankSummary summary;
};

RankReport rank_methods(const std::vector<EvalRecord>& records, double alpha = 0.05);

enum class Analysis { Fig1, Fig2, Tables, Ranks };

// Writes the CSV, SVG and text artifacts for one analysis into out_dir and
// returns the paths written.
std::vector<std::filesystem::path> write_report(const std::vector<EvalRecord>& records, Analysis analysis,
                                                const std::filesystem::path& out_dir, double alpha = 0.05);

} // namespace dao

#endif // DAO_REPORT_HPP
