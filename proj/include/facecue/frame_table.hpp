#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "facecue/matrix.hpp"
#include "facecue/schema.hpp"

namespace facecue {

// One recording's validated per-frame feature matrix.
struct FrameTable {
    std::string subject_id;
    ColumnSchema schema;
    double fps = 0.0;
    Matrix values; // frames x columns

    std::size_t frame_count() const { return values.rows(); }
    double duration_s() const { return static_cast<double>(frame_count()) / fps; }

    // Fraction of frames whose `success` flag is 0 (data-quality statistic).
    // Returns 0 when the schema has no success column.
    double success_zero_fraction() const;
};

// Fixed decimal formatting contract for all CSV output: 9 significant digits.
std::string format_csv_value(double value);

// Parses OpenFace CSV output. When fps is absent it is inferred from the
// timestamp column as (n_frames - 1) / (last - first).
FrameTable parse_openface_csv(std::istream& stream, const std::string& subject_id,
                              std::optional<double> fps = std::nullopt);
FrameTable load_openface_csv(const std::string& path, const std::string& subject_id,
                             std::optional<double> fps = std::nullopt);

void write_openface_csv(const FrameTable& table, std::ostream& out);
void save_openface_csv(const FrameTable& table, const std::string& path);

// Keeps the first floor(target_s * fps) frames. Throws Error(TooShort) when
// the recording does not cover the target duration.
FrameTable trim_to_duration(const FrameTable& table, double target_s);

} // namespace facecue
