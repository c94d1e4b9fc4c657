#ifndef DAO_STATS_HPP
#define DAO_STATS_HPP

#include "dao/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace dao {

struct RegressionResult {
    double slope;
    double intercept;
    double p_value;  // two-sided, H0: slope = 0
    double pearson_rho;
};

// Simple least squares of y on x; t test with n - 2 degrees of freedom.
RegressionResult ols_regression(std::span<const double> x, std::span<const double> y);

struct RankSummary {
    std::vector<double> average_ranks;  // per method, 1 = best
    double critical_distance;
    double alpha;
};

// Per-row ranks of a datasets x methods AUC table (higher AUC = better rank,
// ties share the average rank).
Eigen::MatrixXd rank_rows(const Eigen::MatrixXd& auc_table);

// Friedman average ranks with the Nemenyi critical distance
// q_alpha * sqrt(M (M + 1) / (6 N)). NaN cells count as missing.
RankSummary friedman_nemenyi(const Eigen::MatrixXd& auc_table, double alpha = 0.05);

struct MeanStd {
    double mean;
    double std;  // sample standard deviation (n - 1), 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

} // namespace dao

#endif // DAO_STATS_HPP
