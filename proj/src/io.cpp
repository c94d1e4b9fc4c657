#include "dao/detectors.hpp"
#include "dao/lid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

namespace dao {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void append_double(std::string& out, double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << text;
}

} // namespace

std::string_view to_string(Detector detector) {
    switch (detector) {
    case Detector::KNN:
        return "kNN";
    case Detector::LOF:
        return "LOF";
    case Detector::SLOF:
        return "SLOF";
    case Detector::DAO:
        return "DAO";
    }
    return "?";
}

std::optional<Detector> parse_detector(std::string_view text) {
    const auto in = lowercase(text);
    for (const auto d : {Detector::KNN, Detector::LOF, Detector::SLOF, Detector::DAO}) {
        if (lowercase(to_string(d)) == in) {
            return d;
        }
    }
    return std::nullopt;
}

std::string_view to_string(LidEstimator estimator) {
    switch (estimator) {
    case LidEstimator::MLE:
        return "MLE";
    case LidEstimator::TwoNN:
        return "TwoNN";
    case LidEstimator::TLE:
        return "TLE";
    }
    return "?";
}

std::optional<LidEstimator> parse_lid_estimator(std::string_view text) {
    const auto in = lowercase(text);
    for (const auto e : {LidEstimator::MLE, LidEstimator::TwoNN, LidEstimator::TLE}) {
        if (lowercase(to_string(e)) == in) {
            return e;
        }
    }
    return std::nullopt;
}

void write_lid_csv(const LidProfile& profile, const std::filesystem::path& path) {
    std::string out = "index,id,log_id\n";
    for (Index i = 0; i < profile.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        append_double(out, profile.ids(i));
        out += ',';
        append_double(out, profile.log_ids(i));
        out += '\n';
    }
    write_text(path, out);
}

void write_scores_csv(const ScoreVector& scores, const std::filesystem::path& path) {
    std::string out = "index,score\n";
    for (Index i = 0; i < scores.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        append_double(out, scores.scores(i));
        out += '\n';
    }
    write_text(path, out);
}

} // namespace dao
