#include "dao/cli.hpp"

#include "dao/dataset.hpp"
#include "dao/detectors.hpp"
#include "dao/harness.hpp"
#include "dao/lid.hpp"
#include "dao/neighbors.hpp"
#include "dao/parallel.hpp"
#include "dao/report.hpp"
#include "dao/synthgen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <ostream>

namespace dao::cli {

namespace {

long parse_long(std::string_view text) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw CLI::ValidationError("integer list", "bad integer '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<std::filesystem::path> files;
    for (const auto& in : inputs) {
        const std::filesystem::path p(in);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

struct GenArgs {
    int reps = 1;
    std::string dims = "2..32:2";
    std::uint64_t seed = 0;
    std::string out = "data";
    int dim_c1 = 8;
    int cluster_size = 800;
};

struct RunArgs {
    std::vector<std::string> data;
    std::string out = "records.csv";
    std::vector<std::string> detectors{"kNN", "LOF", "SLOF", "DAO"};
    std::string k = "5..100";
    std::string lid = "MLE";
    std::string lid_k;
    std::string label_column = "label";
    std::string cache;
    std::string timing;
    int threads = 0;
    int timing_repeats = 1;
};

struct ReportArgs {
    std::string records;
    std::string analysis = "all";
    std::string out = "report";
    double alpha = 0.05;
};

struct LidArgs {
    std::string data;
    std::string estimator = "MLE";
    long k = 100;
    std::string out = "lid.csv";
};

struct ScoreArgs {
    std::string data;
    std::string detector = "DAO";
    long k = 10;
    std::string lid = "MLE";
    long lid_k = 100;
    std::string out = "scores.csv";
};

struct CacheArgs {
    std::string data;
    long kmax = 100;
    std::string out = "knn-cache";
    std::string method = "auto";
};

Dataset load_dataset(const std::string& path, std::optional<std::string> label_column, std::ostream& err) {
    CsvOptions options;
    options.label_column = std::move(label_column);
    LoadResult loaded = [&] {
        try {
            return load_csv(path, options);
        } catch (const DataError& e) {
            throw DataError(path + ": " + e.what());
        }
    }();
    if (loaded.duplicates_dropped > 0) {
        err << "note: " << path << ": dropped " << loaded.duplicates_dropped << " duplicate rows\n";
    }
    if (lacks_continuous_feature(loaded.dataset)) {
        err << "warning: " << path << ": no feature has at least "
            << static_cast<int>(kMinDistinctFraction * 100) << "% distinct values\n";
    }
    return std::move(loaded.dataset);
}

// Label column is used when the file has one.
Dataset load_maybe_labeled(const std::string& path, const std::string& label_column, std::ostream& err) {
    try {
        return load_dataset(path, label_column, err);
    } catch (const DataError& e) {
        if (std::string(e.what()).find("label column") == std::string::npos) {
            throw;
        }
        return load_dataset(path, std::nullopt, err);
    }
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
    std::vector<int> dims;
    for (const long d : parse_int_list(args.dims)) {
        dims.push_back(static_cast<int>(d));
    }
    SynthSpec base;
    base.dim_c1 = args.dim_c1;
    base.cluster_size = args.cluster_size;
    for (const int d : dims) {
        if (d < 2 || d > base.ambient_dim) {
            throw CLI::ValidationError("--dims", "cluster-2 dimension " + std::to_string(d) + " outside [2, " +
                                                     std::to_string(base.ambient_dim) + "]");
        }
    }
    const auto suite = benchmark_suite(args.reps, dims, args.seed, base);
    for (const auto& s : suite) {
        write_synth(s, args.out);
    }
    out << "wrote " << suite.size() << " datasets to " << args.out << "\n";
    return kOk;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    SweepConfig base;
    base.detectors.clear();
    for (const auto& name : args.detectors) {
        const auto d = parse_detector(name);
        if (!d) {
            throw CLI::ValidationError("--detectors", "unknown detector '" + name + "'");
        }
        base.detectors.push_back(*d);
    }
    base.detector_ks.clear();
    for (const long k : parse_int_list(args.k)) {
        base.detector_ks.push_back(k);
    }
    const auto estimator = parse_lid_estimator(args.lid);
    if (!estimator) {
        throw CLI::ValidationError("--lid", "unknown estimator '" + args.lid + "'");
    }
    base.lid.estimator = *estimator;
    if (!args.lid_k.empty()) {
        for (const long k : parse_int_list(args.lid_k)) {
            base.lid.k_grid.push_back(k);
        }
    }

    std::vector<EvalRecord> records;
    std::size_t skipped = 0;
    const auto files = expand_inputs(args.data);
    if (files.empty()) {
        throw CLI::ValidationError("--data", "no input datasets");
    }
    for (const auto& file : files) {
        const Dataset dataset = load_maybe_labeled(file.string(), args.label_column, err);
        if (!dataset.labeled()) {
            err << "warning: " << file.string() << ": no '" << args.label_column << "' column, skipped\n";
            ++skipped;
            continue;
        }
        SweepConfig config = base;
        if (truncate_to_dataset(config, dataset.size()) > 0) {
            err << "warning: " << file.string() << ": neighborhood sizes above n - 1 = " << dataset.size() - 1
                << " dropped\n";
        }
        if (config.detector_ks.empty()) {
            throw DataError("'" + file.string() + "': no detector k fits n = " + std::to_string(dataset.size()));
        }
        const Index kmax = required_kmax(dataset, config);
        const NeighborGraph graph = args.cache.empty() ? build_neighbor_graph(dataset, kmax)
                                                       : cached_neighbor_graph(dataset, kmax, args.cache);
        auto rows = evaluate_dataset(dataset, config, graph);
        const auto sidecar = read_sidecar(file);
        for (auto& r : rows) {
            if (sidecar) {
                r.dim_c1 = sidecar->dim_c1;
                r.dim_c2 = sidecar->dim_c2;
            }
            if (!args.timing.empty()) {
                r.runtime_seconds = time_detector(graph, dataset, r.detector, config.detector_ks, config.lid,
                                                  {args.timing_repeats});
            }
        }
        records.insert(records.end(), rows.begin(), rows.end());
    }
    if (records.empty()) {
        err << "error: all " << skipped << " datasets were skipped\n";
        return kDataError;
    }
    write_records(records, args.out);
    if (!args.timing.empty()) {
        write_timings(records, args.timing);
    }
    out << "wrote " << records.size() << " records to " << args.out << "\n";
    return kOk;
}

int cmd_report(const ReportArgs& args, std::ostream& out) {
    const auto records = read_records(args.records);
    std::vector<Analysis> analyses;
    if (args.analysis == "fig1") {
        analyses = {Analysis::Fig1};
    } else if (args.analysis == "fig2") {
        analyses = {Analysis::Fig2};
    } else if (args.analysis == "tables") {
        analyses = {Analysis::Tables};
    } else if (args.analysis == "ranks") {
        analyses = {Analysis::Ranks};
    } else {
        analyses = {Analysis::Fig1, Analysis::Fig2, Analysis::Tables, Analysis::Ranks};
    }
    for (const auto a : analyses) {
        for (const auto& path : write_report(records, a, args.out, args.alpha)) {
            out << path.string() << "\n";
        }
    }
    return kOk;
}

int cmd_lid(const LidArgs& args, std::ostream& out, std::ostream& err) {
    const auto estimator = parse_lid_estimator(args.estimator);
    if (!estimator) {
        throw CLI::ValidationError("--estimator", "unknown estimator '" + args.estimator + "'");
    }
    const Dataset dataset = load_dataset(args.data, std::nullopt, err);
    const Index kmax = std::max<Index>(2, args.k);
    if (kmax > dataset.size() - 1) {
        throw DataError("k = " + std::to_string(args.k) + " exceeds n - 1 = " + std::to_string(dataset.size() - 1));
    }
    const auto graph = build_neighbor_graph(dataset, kmax);
    const auto profile = estimate_lid(*estimator, graph, dataset.points(), args.k);
    write_lid_csv(profile, args.out);
    out << "wrote " << profile.size() << " estimates to " << args.out << "\n";
    return kOk;
}

int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err) {
    const auto detector = parse_detector(args.detector);
    if (!detector) {
        throw CLI::ValidationError("--detector", "unknown detector '" + args.detector + "'");
    }
    const auto estimator = parse_lid_estimator(args.lid);
    if (!estimator) {
        throw CLI::ValidationError("--lid", "unknown estimator '" + args.lid + "'");
    }
    const Dataset dataset = load_dataset(args.data, std::nullopt, err);
    Index kmax = args.k;
    if (*detector == Detector::DAO) {
        kmax = std::max<Index>(kmax, std::max<long>(args.lid_k, 2));
    }
    if (kmax > dataset.size() - 1) {
        throw DataError("neighborhood size exceeds n - 1 = " + std::to_string(dataset.size() - 1));
    }
    const auto graph = build_neighbor_graph(dataset, kmax);
    std::optional<LidProfile> lids;
    if (*detector == Detector::DAO) {
        lids = estimate_lid(*estimator, graph, dataset.points(), args.lid_k);
    }
    const auto scores = score_detector(graph, *detector, args.k, lids ? &*lids : nullptr);
    write_scores_csv(scores, args.out);
    out << "wrote " << scores.size() << " scores to " << args.out << "\n";
    return kOk;
}

int cmd_cache(const CacheArgs& args, std::ostream& out, std::ostream& err) {
    const Dataset dataset = load_dataset(args.data, std::nullopt, err);
    NeighborMethod method = recommended_method(dataset.dim());
    if (args.method == "brute") {
        method = NeighborMethod::Brute;
    } else if (args.method == "kdtree") {
        method = NeighborMethod::KdTree;
    }
    const auto graph = build_neighbor_graph(dataset, args.kmax, method);
    std::filesystem::create_directories(args.out);
    const auto path = graph_cache_path(args.out, dataset, args.kmax);
    write_graph(graph, path);
    out << path.string() << "\n";
    return kOk;
}

} // namespace

std::vector<long> parse_int_list(std::string_view text) {
    std::vector<long> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view item = text.substr(start, comma - start);
        if (item.empty()) {
            throw CLI::ValidationError("integer list", "empty item in '" + std::string(text) + "'");
        }
        const std::size_t dots = item.find("..");
        if (dots == std::string_view::npos) {
            values.push_back(parse_long(item));
        } else {
            const std::string_view rest = item.substr(dots + 2);
            const std::size_t colon = rest.find(':');
            const long lo = parse_long(item.substr(0, dots));
            const long hi = parse_long(rest.substr(0, colon));
            const long step = colon == std::string_view::npos ? 1 : parse_long(rest.substr(colon + 1));
            if (step < 1 || hi < lo) {
                throw CLI::ValidationError("integer list", "bad range '" + std::string(item) + "'");
            }
            for (long v = lo; v <= hi; v += step) {
                values.push_back(v);
            }
        }
        start = comma + 1;
    }
    return values;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dimensionality-aware outlier detection benchmark tools"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML-style key = value file; command-line flags take precedence");
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: DAO_THREADS or all cores)");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate the synthetic two-cluster benchmark");
    gen_cmd->add_option("--reps", gen.reps, "Realizations per cluster-2 dimension")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--dims", gen.dims, "Cluster-2 dimensions, e.g. 2..32:2 or 2,8,16,32");
    gen_cmd->add_option("--seed", gen.seed, "Base seed; dataset i uses seed + i");
    gen_cmd->add_option("--out", gen.out, "Output directory");
    gen_cmd->add_option("--dim-c1", gen.dim_c1, "Intrinsic dimension of cluster 1");
    gen_cmd->add_option("--cluster-size", gen.cluster_size, "Points per cluster");

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Best-k ROC AUC sweep per dataset and detector");
    run_cmd->add_option("--data", run_args.data, "Dataset CSV files or directories")->required();
    run_cmd->add_option("--out", run_args.out, "Records CSV");
    run_cmd->add_option("--detectors", run_args.detectors, "Subset of kNN, LOF, SLOF, DAO")->delimiter(',');
    run_cmd->add_option("--k", run_args.k, "Detector neighborhood sizes");
    run_cmd->add_option("--lid", run_args.lid, "LID estimator for DAO: MLE, TwoNN, TLE");
    run_cmd->add_option("--lid-k", run_args.lid_k, "LID neighborhood sizes (default: standard grid)");
    run_cmd->add_option("--label-column", run_args.label_column, "Name of the 0/1 outlier label column");
    run_cmd->add_option("--cache", run_args.cache, "Neighbor graph cache directory");
    run_cmd->add_option("--timing", run_args.timing, "Also time every detector and write this CSV");
    run_cmd->add_option("--timing-repeats", run_args.timing_repeats, "Timing passes per detector");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Figures, regression tables and ranks from records");
    report_cmd->add_option("--records", report.records, "Records CSV written by run")->required();
    report_cmd->add_option("--analysis", report.analysis, "fig1, fig2, tables, ranks or all")
        ->check(CLI::IsMember({"fig1", "fig2", "tables", "ranks", "all"}));
    report_cmd->add_option("--out", report.out, "Output directory");
    report_cmd->add_option("--alpha", report.alpha, "Nemenyi significance level");

    LidArgs lid;
    auto* lid_cmd = app.add_subcommand("lid", "Dump per-point LID estimates");
    lid_cmd->add_option("--data", lid.data, "Dataset CSV")->required();
    lid_cmd->add_option("--estimator", lid.estimator, "MLE, TwoNN or TLE");
    lid_cmd->add_option("--k", lid.k, "Neighborhood size (TwoNN: pooled neighbors, 0 = single ratio)");
    lid_cmd->add_option("--out", lid.out, "Output CSV");

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Dump per-point outlier scores");
    score_cmd->add_option("--data", score.data, "Dataset CSV")->required();
    score_cmd->add_option("--detector", score.detector, "kNN, LOF, SLOF or DAO");
    score_cmd->add_option("--k", score.k, "Neighborhood size")->check(CLI::PositiveNumber);
    score_cmd->add_option("--lid", score.lid, "LID estimator for DAO");
    score_cmd->add_option("--lid-k", score.lid_k, "LID neighborhood size for DAO");
    score_cmd->add_option("--out", score.out, "Output CSV");

    CacheArgs cache;
    auto* cache_cmd = app.add_subcommand("knn-cache", "Build and store a neighbor graph");
    cache_cmd->add_option("--data", cache.data, "Dataset CSV")->required();
    cache_cmd->add_option("--kmax", cache.kmax, "Neighborhood capacity")->check(CLI::PositiveNumber);
    cache_cmd->add_option("--out", cache.out, "Cache directory");
    cache_cmd->add_option("--method", cache.method, "auto, brute or kdtree")
        ->check(CLI::IsMember({"auto", "brute", "kdtree"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    if (threads > 0) {
        set_thread_count(static_cast<std::size_t>(threads));
    }

    try {
        if (*gen_cmd) {
            return cmd_gen(gen, out);
        }
        if (*run_cmd) {
            return cmd_run(run_args, out, err);
        }
        if (*report_cmd) {
            return cmd_report(report, out);
        }
        if (*lid_cmd) {
            return cmd_lid(lid, out, err);
        }
        if (*score_cmd) {
            return cmd_score(score, out, err);
        }
        if (*cache_cmd) {
            return cmd_cache(cache, out, err);
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IncompleteGridError& e) {
        err << "error: " << e.what() << "\n";
        return kIncompleteGrid;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"dao"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace dao::cli
