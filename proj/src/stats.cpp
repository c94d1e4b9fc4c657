#include "dao/stats.hpp"

#include "dao/special.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dao {

RegressionResult ols_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("regression inputs differ in length");
    }
    const auto n = x.size();
    if (n < 3) {
        throw std::invalid_argument("regression needs at least 3 points");
    }
    const double nd = static_cast<double>(n);
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nd;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / nd;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) {
        throw std::invalid_argument("regression needs x with nonzero variance");
    }
    RegressionResult r{};
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.pearson_rho = syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - r.intercept - r.slope * x[i];
        sse += e * e;
    }
    const double dof = nd - 2;
    const double se = std::sqrt(sse / dof / sxx);
    if (se == 0) {
        r.p_value = r.slope == 0 ? 1.0 : 0.0;
    } else {
        r.p_value = std::clamp(student_t_two_sided_p(r.slope / se, dof), 0.0, 1.0);
    }
    return r;
}

Eigen::MatrixXd rank_rows(const Eigen::MatrixXd& auc_table) {
    Eigen::MatrixXd ranks(auc_table.rows(), auc_table.cols());
    std::vector<Index> order(static_cast<std::size_t>(auc_table.cols()));
    for (Index r = 0; r < auc_table.rows(); ++r) {
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(),
                  [&](Index a, Index b) { return auc_table(r, a) > auc_table(r, b); });
        for (std::size_t lo = 0; lo < order.size();) {
            std::size_t hi = lo + 1;
            while (hi < order.size() && auc_table(r, order[hi]) == auc_table(r, order[lo])) {
                ++hi;
            }
            const double avg = 0.5 * static_cast<double>(lo + 1 + hi);
            for (std::size_t p = lo; p < hi; ++p) {
                ranks(r, order[p]) = avg;
            }
            lo = hi;
        }
    }
    return ranks;
}

RankSummary friedman_nemenyi(const Eigen::MatrixXd& auc_table, double alpha) {
    const Index datasets = auc_table.rows();
    const Index methods = auc_table.cols();
    if (methods < 2) {
        throw std::invalid_argument("rank test needs >= 2 methods");
    }
    if (datasets < 2) {
        throw IncompleteGridError("rank test needs >= 2 datasets");
    }
    if (auc_table.array().isNaN().any()) {
        throw IncompleteGridError("rank test table has missing cells");
    }
    const Eigen::MatrixXd ranks = rank_rows(auc_table);
    RankSummary out;
    out.alpha = alpha;
    const Eigen::VectorXd avg = ranks.colwise().mean().transpose();
    out.average_ranks.assign(avg.data(), avg.data() + avg.size());
    const double m = static_cast<double>(methods);
    out.critical_distance = nemenyi_q(alpha, static_cast<int>(methods)) *
                            std::sqrt(m * (m + 1) / (6.0 * static_cast<double>(datasets)));
    return out;
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of empty sample");
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) {
        return {mean, 0.0};
    }
    double ss = 0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / (n - 1))};
}

} // namespace dao
