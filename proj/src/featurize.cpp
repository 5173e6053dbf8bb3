#include "facecue/featurize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "facecue/errors.hpp"

namespace facecue {
namespace {

// Welford running mean / M2.
struct RunningStats {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;

    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }

    double std_dev(bool population) const {
        if (n < 2 && !population) return 0.0;
        const double div = population ? static_cast<double>(n) : static_cast<double>(n - 1);
        return std::sqrt(m2 / div);
    }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

AggregatedVector aggregate_full(const FrameTable& table, StatSet stats, bool population_std) {
    if (!stats.mean && !stats.std_dev)
        throw Error(Errc::ConfigInvalid, "at least one of mean/std must be requested");
    const std::size_t n = table.frame_count();
    if (stats.std_dev && !population_std && n < 2)
        throw Error(Errc::TooFewFrames,
                    "sample std needs at least 2 frames, got " + std::to_string(n));

    const std::vector<int> cols = table.schema.non_metadata_indices();
    std::vector<RunningStats> acc(cols.size());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < cols.size(); ++i)
            acc[i].add(table.values.at(r, static_cast<std::size_t>(cols[i])));

    AggregatedVector out;
    out.subject_id = table.subject_id;
    const std::size_t width = cols.size() * ((stats.mean ? 1 : 0) + (stats.std_dev ? 1 : 0));
    out.feature_names.reserve(width);
    out.values.reserve(width);
    if (stats.mean) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out.feature_names.push_back(table.schema.columns[static_cast<std::size_t>(cols[i])].name +
                                        "__mean");
            out.values.push_back(acc[i].mean);
        }
    }
    if (stats.std_dev) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out.feature_names.push_back(table.schema.columns[static_cast<std::size_t>(cols[i])].name +
                                        "__std");
            out.values.push_back(acc[i].std_dev(population_std));
        }
    }
    return out;
}

ChunkSet chunk_and_flatten(const FrameTable& table, double window_s) {
    if (window_s <= 0.0) throw Error(Errc::ConfigInvalid, "window_s must be positive");
    const auto window_frames = static_cast<std::size_t>(std::floor(window_s * table.fps + 1e-9));
    if (window_frames == 0)
        throw Error(Errc::WindowTooSmall, "window of " + format_csv_value(window_s) + " s at " +
                                              format_csv_value(table.fps) + " fps spans no frames");

    const std::vector<int> cols = table.schema.non_metadata_indices();
    ChunkSet set;
    set.subject_id = table.subject_id;
    set.window_s = window_s;

    const std::size_t n_chunks = table.frame_count() / window_frames;
    set.vectors.reserve(n_chunks);
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
        const std::size_t begin = chunk * window_frames;
        AggregatedVector vec;
        vec.subject_id = table.subject_id;
        vec.chunk_index = static_cast<int>(chunk);
        vec.feature_names.reserve(cols.size());
        vec.values.reserve(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) {
            double sum = 0.0;
            for (std::size_t r = begin; r < begin + window_frames; ++r)
                sum += table.values.at(r, static_cast<std::size_t>(cols[i]));
            vec.feature_names.push_back(table.schema.columns[static_cast<std::size_t>(cols[i])].name +
                                        "__mean");
            vec.values.push_back(sum / static_cast<double>(window_frames));
        }
        set.vectors.push_back(std::move(vec));
    }
    return set;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(Errc::LengthMismatch, "pearson inputs of length " + std::to_string(x.size()) +
                                              " and " + std::to_string(y.size()));
    if (x.size() < 2)
        throw Error(Errc::TooFewSamples, "pearson needs at least 2 observations");

    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0; // zero-variance convention
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

PruneResult prune_correlated(const Matrix& matrix, double threshold) {
    if (matrix.rows() < 2)
        throw Error(Errc::TooFewSamples,
                    "correlation pruning needs at least 2 rows, got " + std::to_string(matrix.rows()));
    if (threshold <= 0.0 || threshold > 1.0)
        throw Error(Errc::ConfigInvalid, "correlation threshold must be in (0, 1]");

    const std::size_t n = matrix.rows();
    const std::size_t d = matrix.cols();

    // Center columns once; r(i, j) = dot(ci, cj) / (norm_i * norm_j).
    Matrix centered(n, d);
    std::vector<double> norms(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += matrix.at(r, c);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double v = matrix.at(r, c) - mean;
            centered.at(r, c) = v;
            ss += v * v;
        }
        norms[c] = std::sqrt(ss);
    }

    PruneResult result;
    result.threshold = threshold;
    for (std::size_t j = 0; j < d; ++j) {
        bool keep = true;
        for (int i : result.kept_indices) {
            double abs_r = 0.0;
            if (norms[j] != 0.0 && norms[static_cast<std::size_t>(i)] != 0.0) {
                double dot = 0.0;
                for (std::size_t r = 0; r < n; ++r)
                    dot += centered.at(r, j) * centered.at(r, static_cast<std::size_t>(i));
                abs_r = std::min(1.0, std::abs(dot) / (norms[j] * norms[static_cast<std::size_t>(i)]));
            }
            if (abs_r > threshold) {
                result.dropped.push_back({static_cast<int>(j), i, abs_r});
                keep = false;
                break;
            }
        }
        if (keep) result.kept_indices.push_back(static_cast<int>(j));
    }
    return result;
}

void write_aggregated_csv(const std::vector<AggregatedVector>& vectors, std::ostream& out) {
    if (vectors.empty()) return;
    const bool with_chunks = vectors.front().chunk_index.has_value();
    out << "subject_id";
    if (with_chunks) out << ",chunk_index";
    for (const auto& name : vectors.front().feature_names) out << ',' << name;
    out << '\n';
    for (const auto& vec : vectors) {
        if (vec.feature_names != vectors.front().feature_names)
            throw Error(Errc::SampleMisalignment,
                        "sample '" + vec.subject_id + "' has a different feature list");
        if (vec.chunk_index.has_value() != with_chunks)
            throw Error(Errc::SampleMisalignment,
                        "sample '" + vec.subject_id + "' mixes chunked and whole-recording rows");
        out << vec.subject_id;
        if (with_chunks) out << ',' << *vec.chunk_index;
        for (double v : vec.values) out << ',' << format_csv_value(v);
        out << '\n';
    }
}

std::vector<AggregatedVector> read_aggregated_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::EmptyFile, "no header row");

    std::vector<std::string> header;
    {
        std::string_view sv(line);
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = sv.find(',', start);
            if (comma == std::string_view::npos) {
                header.emplace_back(trim(sv.substr(start)));
                break;
            }
            header.emplace_back(trim(sv.substr(start, comma - start)));
            start = comma + 1;
        }
    }
    if (header.empty() || header[0] != "subject_id")
        throw Error(Errc::MalformedManifest, "aggregated CSV must start with a subject_id column");
    const bool with_chunks = header.size() > 1 && header[1] == "chunk_index";
    const std::size_t first_feature = with_chunks ? 2 : 1;
    const std::vector<std::string> names(header.begin() + static_cast<long>(first_feature),
                                         header.end());

    std::vector<AggregatedVector> out;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        std::vector<std::string_view> fields;
        std::string_view sv(line);
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = sv.find(',', start);
            if (comma == std::string_view::npos) {
                fields.push_back(trim(sv.substr(start)));
                break;
            }
            fields.push_back(trim(sv.substr(start, comma - start)));
            start = comma + 1;
        }
        if (fields.size() != header.size())
            throw Error(Errc::RaggedRow, "row " + std::to_string(row) + " has " +
                                             std::to_string(fields.size()) + " cells, expected " +
                                             std::to_string(header.size()));
        AggregatedVector vec;
        vec.subject_id = std::string(fields[0]);
        if (with_chunks) {
            int idx = 0;
            const auto [ptr, ec] =
                std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), idx);
            if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size() || idx < 0)
                throw Error(Errc::NonNumericCell,
                            "row " + std::to_string(row) + ": bad chunk_index");
            vec.chunk_index = idx;
        }
        vec.feature_names = names;
        vec.values.reserve(names.size());
        for (std::size_t c = first_feature; c < fields.size(); ++c) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(fields[c].data(), fields[c].data() + fields[c].size(), v);
            if (ec != std::errc{} || ptr != fields[c].data() + fields[c].size() || !std::isfinite(v))
                throw Error(Errc::NonNumericCell, "row " + std::to_string(row) + ", column '" +
                                                      header[c] + "': bad value");
            vec.values.push_back(v);
        }
        out.push_back(std::move(vec));
    }
    return out;
}

} // namespace facecue
