#include "facecue/frame_table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "facecue/errors.hpp"

namespace facecue {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

double parse_cell(std::string_view token, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw Error(Errc::NonNumericCell, "row " + std::to_string(row) + ", column '" + column +
                                              "': cannot parse '" + std::string(token) +
                                              "' as a finite number");
    return value;
}

} // namespace

double FrameTable::success_zero_fraction() const {
    const int idx = schema.index_of("success");
    if (idx < 0 || frame_count() == 0) return 0.0;
    std::size_t zeros = 0;
    for (std::size_t r = 0; r < frame_count(); ++r)
        if (values.at(r, static_cast<std::size_t>(idx)) == 0.0) ++zeros;
    return static_cast<double>(zeros) / static_cast<double>(frame_count());
}

std::string format_csv_value(double value) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof(buf), "%.9g", value);
    return std::string(buf, static_cast<std::size_t>(n));
}

FrameTable parse_openface_csv(std::istream& stream, const std::string& subject_id,
                              std::optional<double> fps) {
    if (fps && *fps <= 0.0) throw Error(Errc::ConfigInvalid, "fps must be positive");

    std::string line;
    if (!std::getline(stream, line)) throw Error(Errc::EmptyFile, "no header row");

    std::vector<std::string_view> fields;
    split_fields(line, fields);
    std::vector<std::string> names;
    names.reserve(fields.size());
    for (const auto& f : fields) names.emplace_back(f);

    FrameTable table;
    table.subject_id = subject_id;
    table.schema = ColumnSchema::from_names(names);
    const std::size_t width = names.size();

    std::vector<double> cells;
    cells.reserve(width * 64);
    std::size_t n_rows = 0;
    while (std::getline(stream, line)) {
        if (trim(line).empty()) continue;
        split_fields(line, fields);
        ++n_rows;
        if (fields.size() != width)
            throw Error(Errc::RaggedRow, "row " + std::to_string(n_rows) + " has " +
                                             std::to_string(fields.size()) + " cells, expected " +
                                             std::to_string(width));
        for (std::size_t c = 0; c < width; ++c)
            cells.push_back(parse_cell(fields[c], n_rows, names[c]));
    }
    if (n_rows == 0) throw Error(Errc::EmptyFile, "no data rows under the header");

    table.values = Matrix(n_rows, width);
    table.values.data() = std::move(cells);

    if (fps) {
        table.fps = *fps;
    } else {
        const int ts = table.schema.index_of("timestamp");
        if (ts < 0)
            throw Error(Errc::MissingFps,
                        "fps not supplied and no timestamp column to infer it from");
        if (n_rows < 2)
            throw Error(Errc::MissingFps, "fps not supplied and too few frames to infer it");
        const double first = table.values.at(0, static_cast<std::size_t>(ts));
        const double last = table.values.at(n_rows - 1, static_cast<std::size_t>(ts));
        if (last <= first)
            throw Error(Errc::MissingFps, "timestamps not increasing; cannot infer fps");
        table.fps = static_cast<double>(n_rows - 1) / (last - first);
    }
    return table;
}

FrameTable load_openface_csv(const std::string& path, const std::string& subject_id,
                             std::optional<double> fps) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IOFailure, "cannot open '" + path + "'");
    return parse_openface_csv(in, subject_id, fps);
}

void write_openface_csv(const FrameTable& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.schema.size(); ++c) {
        if (c > 0) out << ", ";
        out << table.schema.columns[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < table.frame_count(); ++r) {
        for (std::size_t c = 0; c < table.schema.size(); ++c) {
            if (c > 0) out << ", ";
            out << format_csv_value(table.values.at(r, c));
        }
        out << '\n';
    }
}

void save_openface_csv(const FrameTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IOFailure, "cannot open '" + path + "' for writing");
    write_openface_csv(table, out);
    out.flush();
    if (!out) throw Error(Errc::IOFailure, "failed writing '" + path + "'");
}

FrameTable trim_to_duration(const FrameTable& table, double target_s) {
    if (target_s <= 0.0) throw Error(Errc::ConfigInvalid, "trim target must be positive");
    // frames-based cutoff; the +1e-9 guards against 90 * fps landing a hair
    // below an integer. Idempotence requires comparing frame counts, not
    // durations: the kept table may be a sub-frame shorter than target_s.
    const auto keep = static_cast<std::size_t>(std::floor(target_s * table.fps + 1e-9));
    if (keep < 1) throw Error(Errc::ConfigInvalid, "trim target shorter than one frame");
    if (table.frame_count() < keep)
        throw Error(Errc::TooShort, "recording '" + table.subject_id + "' covers " +
                                        format_csv_value(table.duration_s()) + " s < " +
                                        format_csv_value(target_s) + " s");
    FrameTable out;
    out.subject_id = table.subject_id;
    out.schema = table.schema;
    out.fps = table.fps;
    out.values = Matrix(keep, table.schema.size());
    for (std::size_t r = 0; r < keep; ++r) out.values.set_row(r, table.values.row(r));
    return out;
}

} // namespace facecue
