#include "dao/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dao {

namespace {

constexpr const char* kRecordHeader =
    "dataset,dim_c1,dim_c2,detector,lid_estimator,best_k,lid_k,roc_auc,dispersion_R,morans_I,morans_k";

std::string num(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

std::string scientific(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", value);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_real(const std::string& s, std::size_t line) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("records line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

long parse_int(const std::string& s, std::size_t line) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("records line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << text;
}

// dataset -> method -> record, with every dataset required to cover every
// method that appears anywhere in the records.
struct Grid {
    std::vector<std::string> datasets;  // first-appearance order
    std::vector<std::string> methods;
    std::map<std::string, std::map<std::string, const EvalRecord*>> cells;

    const EvalRecord& at(const std::string& dataset, const std::string& method) const {
        return *cells.at(dataset).at(method);
    }
};

Grid complete_grid(const std::vector<EvalRecord>& records) {
    if (records.empty()) {
        throw IncompleteGridError("no records");
    }
    Grid grid;
    for (const auto& r : records) {
        const auto method = method_label(r);
        if (std::find(grid.datasets.begin(), grid.datasets.end(), r.dataset) == grid.datasets.end()) {
            grid.datasets.push_back(r.dataset);
        }
        if (std::find(grid.methods.begin(), grid.methods.end(), method) == grid.methods.end()) {
            grid.methods.push_back(method);
        }
        grid.cells[r.dataset][method] = &r;
    }
    std::string missing;
    for (const auto& d : grid.datasets) {
        for (const auto& m : grid.methods) {
            if (!grid.cells[d].contains(m)) {
                missing += (missing.empty() ? "" : ", ") + d + ":" + m;
            }
        }
    }
    if (!missing.empty()) {
        throw IncompleteGridError("records missing cells: " + missing);
    }
    return grid;
}

void require_method(const Grid& grid, const std::string& method) {
    if (std::find(grid.methods.begin(), grid.methods.end(), method) == grid.methods.end()) {
        throw IncompleteGridError("records contain no '" + method + "' rows");
    }
}

std::vector<std::string> competitors_of(const Grid& grid, const std::string& reference) {
    std::vector<std::string> out;
    for (const auto& m : grid.methods) {
        if (m != reference) {
            out.push_back(m);
        }
    }
    return out;
}

// Minimal SVG canvas with a linear data-to-pixel mapping.
class Svg {
public:
    Svg(double xmin, double xmax, double ymin, double ymax) : x0_(xmin), x1_(xmax), y0_(ymin), y1_(ymax) {
        if (x1_ <= x0_) {
            x1_ = x0_ + 1;
        }
        if (y1_ <= y0_) {
            y1_ = y0_ + 1;
        }
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
              << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
              << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    double px(double x) const { return kMargin + (x - x0_) / (x1_ - x0_) * (kWidth - 2 * kMargin); }
    double py(double y) const { return kHeight - kMargin - (y - y0_) / (y1_ - y0_) * (kHeight - 2 * kMargin); }

    void axes(const std::string& xlabel, const std::string& ylabel) {
        line(px(x0_), py(y0_), px(x1_), py(y0_), "black");
        line(px(x0_), py(y0_), px(x0_), py(y1_), "black");
        for (int t = 0; t <= 4; ++t) {
            const double xv = x0_ + (x1_ - x0_) * t / 4;
            const double yv = y0_ + (y1_ - y0_) * t / 4;
            text(px(xv), py(y0_) + 16, fixed(xv, 2), "middle");
            text(px(x0_) - 6, py(yv) + 4, fixed(yv, 2), "end");
        }
        text(kWidth / 2.0, kHeight - 8, xlabel, "middle");
        body_ << "<text x=\"14\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 14 " << kHeight / 2
              << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    }

    void line(double xa, double ya, double xb, double yb, const std::string& color) {
        body_ << "<line x1=\"" << fixed(xa, 2) << "\" y1=\"" << fixed(ya, 2) << "\" x2=\"" << fixed(xb, 2)
              << "\" y2=\"" << fixed(yb, 2) << "\" stroke=\"" << color << "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
        body_ << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << color << "\" points=\"";
        for (const auto& [x, y] : pts) {
            body_ << fixed(px(x), 2) << ',' << fixed(py(y), 2) << ' ';
        }
        body_ << "\"/>\n";
    }

    void dot(double x, double y, const std::string& color, double opacity) {
        body_ << "<circle cx=\"" << fixed(px(x), 2) << "\" cy=\"" << fixed(py(y), 2) << "\" r=\"4\" fill=\""
              << color << "\" fill-opacity=\"" << fixed(opacity, 3) << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, const std::string& anchor = "start") {
        body_ << "<text x=\"" << fixed(x, 2) << "\" y=\"" << fixed(y, 2) << "\" text-anchor=\"" << anchor
              << "\">" << s << "</text>\n";
    }

    std::string str() const { return body_.str() + "</svg>\n"; }

private:
    static constexpr int kWidth = 640;
    static constexpr int kHeight = 420;
    static constexpr int kMargin = 60;
    double x0_, x1_, y0_, y1_;
    std::ostringstream body_;
};

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors[i % 6];
}

std::string regression_csv(const std::vector<RegressionRow>& rows) {
    std::string out = "pair,m,p,rho\n";
    for (const auto& r : rows) {
        out += r.pair + ',' + num(r.result.slope) + ',' + num(r.result.p_value) + ',' + num(r.result.pearson_rho) + '\n';
    }
    return out;
}

std::string regression_text(const std::string& title, const std::vector<RegressionRow>& rows) {
    std::string out = title + "\n";
    for (const auto& r : rows) {
        out += "  " + r.pair + "  m = " + fixed(r.result.slope, 4) + "  p = " + scientific(r.result.p_value) +
               "  rho = " + fixed(r.result.pearson_rho, 3) + "\n";
    }
    return out;
}

} // namespace

std::string method_label(const EvalRecord& record) {
    std::string label(to_string(record.detector));
    if (record.lid_estimator) {
        label += '_';
        label += to_string(*record.lid_estimator);
    }
    return label;
}

void write_records(const std::vector<EvalRecord>& records, const std::filesystem::path& path) {
    std::string out = std::string(kRecordHeader) + "\n";
    for (const auto& r : records) {
        out += r.dataset + ',';
        out += (r.dim_c1 ? std::to_string(*r.dim_c1) : "") + ',';
        out += (r.dim_c2 ? std::to_string(*r.dim_c2) : "") + ',';
        out += std::string(to_string(r.detector)) + ',';
        out += (r.lid_estimator ? std::string(to_string(*r.lid_estimator)) : "") + ',';
        out += std::to_string(r.best_k) + ',' + std::to_string(r.lid_k) + ',';
        out += num(r.roc_auc) + ',' + num(r.dispersion_R) + ',' + num(r.morans_I) + ',';
        out += std::to_string(r.morans_k) + '\n';
    }
    write_text(path, out);
}

std::vector<EvalRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != kRecordHeader) {
        throw DataError("'" + path.string() + "' is not a records file");
    }
    std::vector<EvalRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 11) {
            throw DataError("records line " + std::to_string(line_no) + ": expected 11 fields");
        }
        EvalRecord r;
        r.dataset = f[0];
        if (!f[1].empty()) {
            r.dim_c1 = static_cast<int>(parse_int(f[1], line_no));
        }
        if (!f[2].empty()) {
            r.dim_c2 = static_cast<int>(parse_int(f[2], line_no));
        }
        const auto detector = parse_detector(f[3]);
        if (!detector) {
            throw DataError("records line " + std::to_string(line_no) + ": unknown detector '" + f[3] + "'");
        }
        r.detector = *detector;
        if (!f[4].empty()) {
            r.lid_estimator = parse_lid_estimator(f[4]);
            if (!r.lid_estimator) {
                throw DataError("records line " + std::to_string(line_no) + ": unknown estimator '" + f[4] + "'");
            }
        }
        r.best_k = parse_int(f[5], line_no);
        r.lid_k = parse_int(f[6], line_no);
        r.roc_auc = parse_real(f[7], line_no);
        r.dispersion_R = parse_real(f[8], line_no);
        r.morans_I = parse_real(f[9], line_no);
        r.morans_k = parse_int(f[10], line_no);
        records.push_back(std::move(r));
    }
    return records;
}

void write_timings(const std::vector<EvalRecord>& records, const std::filesystem::path& path) {
    std::string out = "dataset,method,runtime_mean,runtime_std\n";
    for (const auto& r : records) {
        if (r.runtime_seconds) {
            out += r.dataset + ',' + method_label(r) + ',' + num(r.runtime_seconds->mean) + ',' +
                   num(r.runtime_seconds->std) + '\n';
        }
    }
    write_text(path, out);
}

std::vector<Fig1Row> fig1_table(const std::vector<EvalRecord>& records) {
    const Grid grid = complete_grid(records);
    std::map<int, std::map<std::string, std::vector<double>>> values;
    for (const auto& r : records) {
        if (!r.dim_c2) {
            throw IncompleteGridError("record for '" + r.dataset + "' has no cluster-2 dimension");
        }
        values[*r.dim_c2][method_label(r)].push_back(r.roc_auc);
    }
    std::vector<Fig1Row> rows;
    for (const auto& [dim, per_method] : values) {
        for (const auto& method : grid.methods) {
            const auto& v = per_method.at(method);
            const auto ms = mean_std(v);
            rows.push_back({dim, method, ms.mean, ms.std, v.size()});
        }
    }
    return rows;
}

std::vector<Fig2Point> fig2_points(const std::vector<EvalRecord>& records, const std::string& reference) {
    const Grid grid = complete_grid(records);
    require_method(grid, reference);
    const auto competitors = competitors_of(grid, reference);
    if (competitors.empty()) {
        throw IncompleteGridError("no competitor methods next to '" + reference + "'");
    }
    std::vector<Fig2Point> points;
    for (const auto& d : grid.datasets) {
        const auto& ref = grid.at(d, reference);
        double oracle = -1;
        for (const auto& c : competitors) {
            const double auc = grid.at(d, c).roc_auc;
            oracle = std::max(oracle, auc);
            points.push_back({d, c, ref.morans_I, ref.dispersion_R, ref.roc_auc - auc});
        }
        points.push_back({d, "Oracle", ref.morans_I, ref.dispersion_R, ref.roc_auc - oracle});
    }
    return points;
}

std::vector<RegressionRow> dimension_gap_regressions(const std::vector<EvalRecord>& records,
                                                     const std::string& reference) {
    const Grid grid = complete_grid(records);
    require_method(grid, reference);
    std::vector<RegressionRow> rows;
    for (const auto& c : competitors_of(grid, reference)) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& d : grid.datasets) {
            const auto& ref = grid.at(d, reference);
            if (!ref.dim_c1 || !ref.dim_c2) {
                throw IncompleteGridError("record for '" + d + "' has no cluster dimensions");
            }
            x.push_back(std::abs(*ref.dim_c1 - *ref.dim_c2));
            y.push_back(ref.roc_auc - grid.at(d, c).roc_auc);
        }
        rows.push_back({reference.substr(0, reference.find('_')) + ":" + c, ols_regression(x, y)});
    }
    return rows;
}

std::vector<RegressionRow> lid_profile_regressions(const std::vector<EvalRecord>& records,
                                                   const std::string& reference) {
    const Grid grid = complete_grid(records);
    require_method(grid, reference);
    std::vector<RegressionRow> rows;
    const auto prefix = reference.substr(0, reference.find('_'));
    for (const auto& c : competitors_of(grid, reference)) {
        std::vector<double> r;
        std::vector<double> moran;
        std::vector<double> y;
        for (const auto& d : grid.datasets) {
            const auto& ref = grid.at(d, reference);
            if (std::isnan(ref.dispersion_R) || std::isnan(ref.morans_I)) {
                continue;
            }
            r.push_back(ref.dispersion_R);
            moran.push_back(ref.morans_I);
            y.push_back(ref.roc_auc - grid.at(d, c).roc_auc);
        }
        rows.push_back({prefix + ":" + c + "~R", ols_regression(r, y)});
        rows.push_back({prefix + ":" + c + "~MoransI", ols_regression(moran, y)});
    }
    return rows;
}

RankReport rank_methods(const std::vector<EvalRecord>& records, double alpha) {
    const Grid grid = complete_grid(records);
    if (grid.datasets.size() < 2) {
        throw IncompleteGridError("≥2 datasets required");
    }
    Eigen::MatrixXd table(static_cast<Index>(grid.datasets.size()), static_cast<Index>(grid.methods.size()));
    for (std::size_t d = 0; d < grid.datasets.size(); ++d) {
        for (std::size_t m = 0; m < grid.methods.size(); ++m) {
            table(static_cast<Index>(d), static_cast<Index>(m)) = grid.at(grid.datasets[d], grid.methods[m]).roc_auc;
        }
    }
    return {grid.methods, friedman_nemenyi(table, alpha)};
}

std::vector<std::filesystem::path> write_report(const std::vector<EvalRecord>& records, Analysis analysis,
                                                const std::filesystem::path& out_dir, double alpha) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    const auto emit = [&](const std::string& name, const std::string& text) {
        write_text(out_dir / name, text);
        written.push_back(out_dir / name);
    };

    switch (analysis) {
    case Analysis::Fig1: {
        const auto rows = fig1_table(records);
        std::string csv = "dim_c2,method,mean_auc,std_auc,count\n";
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        std::vector<std::string> order;
        double ymin = 1, ymax = 0, xmin = 1e9, xmax = -1e9;
        for (const auto& r : rows) {
            csv += std::to_string(r.dim_c2) + ',' + r.method + ',' + num(r.mean) + ',' + num(r.std) + ',' +
                   std::to_string(r.count) + '\n';
            if (!series.contains(r.method)) {
                order.push_back(r.method);
            }
            series[r.method].push_back({r.dim_c2, r.mean});
            ymin = std::min(ymin, r.mean - r.std);
            ymax = std::max(ymax, r.mean + r.std);
            xmin = std::min<double>(xmin, r.dim_c2);
            xmax = std::max<double>(xmax, r.dim_c2);
        }
        emit("fig1.csv", csv);
        Svg svg(xmin, xmax, std::max(0.0, ymin - 0.02), std::min(1.0, ymax + 0.02));
        svg.axes("intrinsic dimension of cluster 2", "ROC AUC");
        for (std::size_t m = 0; m < order.size(); ++m) {
            svg.polyline(series[order[m]], palette(m));
            svg.text(svg.px(xmax) - 80, 70 + 16.0 * static_cast<double>(m), order[m]);
            svg.line(svg.px(xmax) - 100, 66 + 16.0 * static_cast<double>(m), svg.px(xmax) - 85,
                     66 + 16.0 * static_cast<double>(m), palette(m));
        }
        for (const auto& r : rows) {
            const auto m = static_cast<std::size_t>(std::find(order.begin(), order.end(), r.method) - order.begin());
            svg.line(svg.px(r.dim_c2), svg.py(r.mean - r.std), svg.px(r.dim_c2), svg.py(r.mean + r.std), palette(m));
        }
        emit("fig1.svg", svg.str());
        break;
    }
    case Analysis::Fig2: {
        const auto points = fig2_points(records);
        std::string csv = "dataset,competitor,morans_I,dispersion_R,auc_difference\n";
        std::map<std::string, std::vector<const Fig2Point*>> by_competitor;
        std::vector<std::string> order;
        for (const auto& p : points) {
            csv += p.dataset + ',' + p.competitor + ',' + num(p.morans_I) + ',' + num(p.dispersion_R) + ',' +
                   num(p.auc_difference) + '\n';
            if (!by_competitor.contains(p.competitor)) {
                order.push_back(p.competitor);
            }
            by_competitor[p.competitor].push_back(&p);
        }
        emit("fig2.csv", csv);
        for (const auto& c : order) {
            double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300, dmax = 1e-12;
            for (const auto* p : by_competitor[c]) {
                if (std::isnan(p->morans_I) || std::isnan(p->dispersion_R)) {
                    continue;
                }
                xmin = std::min(xmin, p->morans_I);
                xmax = std::max(xmax, p->morans_I);
                ymin = std::min(ymin, p->dispersion_R);
                ymax = std::max(ymax, p->dispersion_R);
                dmax = std::max(dmax, std::abs(p->auc_difference));
            }
            if (xmin > xmax) {
                xmin = 0, xmax = 1, ymin = 0, ymax = 1;
            }
            Svg svg(xmin, xmax, ymin, ymax);
            svg.axes("Moran's I of log-LID", "dispersion R of log-LID");
            for (const auto* p : by_competitor[c]) {
                if (std::isnan(p->morans_I) || std::isnan(p->dispersion_R)) {
                    continue;
                }
                const double intensity = 0.15 + 0.85 * std::abs(p->auc_difference) / dmax;
                svg.dot(p->morans_I, p->dispersion_R, p->auc_difference >= 0 ? "#1f4fd6" : "#d62728", intensity);
            }
            svg.text(70, 24, "DAO vs " + c);
            emit("fig2_" + c + ".svg", svg.str());
        }
        break;
    }
    case Analysis::Tables: {
        std::string text;
        bool any = false;
        const bool has_dims = std::all_of(records.begin(), records.end(),
                                          [](const EvalRecord& r) { return r.dim_c1 && r.dim_c2; });
        if (has_dims) {
            const auto rows = dimension_gap_regressions(records);
            emit("table2.csv", regression_csv(rows));
            text += regression_text("AUC difference vs |dim_c1 - dim_c2|", rows);
            any = true;
        }
        const bool has_profile = std::any_of(records.begin(), records.end(), [](const EvalRecord& r) {
            return !std::isnan(r.dispersion_R) && !std::isnan(r.morans_I);
        });
        if (has_profile) {
            const auto rows = lid_profile_regressions(records);
            emit("table3.csv", regression_csv(rows));
            text += regression_text("AUC difference vs dispersion R and Moran's I", rows);
            any = true;
        }
        if (!any) {
            throw IncompleteGridError("records carry neither cluster dimensions nor LID profile statistics");
        }
        emit("tables.txt", text);
        break;
    }
    case Analysis::Ranks: {
        const auto report = rank_methods(records, alpha);
        std::string csv = "method,average_rank\n";
        std::string text = "Friedman average ranks (1 = best ROC AUC)\n";
        std::vector<std::size_t> order(report.methods.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return report.summary.average_ranks[a] < report.summary.average_ranks[b];
        });
        for (const auto i : order) {
            csv += report.methods[i] + ',' + num(report.summary.average_ranks[i]) + '\n';
            text += "  " + report.methods[i] + "  " + fixed(report.summary.average_ranks[i], 3) + "\n";
        }
        text += "Nemenyi critical distance at alpha = " + scientific(alpha) + ": " +
                fixed(report.summary.critical_distance, 4) + "\n";
        emit("ranks.csv", csv + "critical_distance," + num(report.summary.critical_distance) + '\n');
        emit("ranks.txt", text);
        break;
    }
    }
    return written;
}

} // namespace dao
