#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facecue/frame_table.hpp"
#include "facecue/matrix.hpp"

namespace facecue {

struct StatSet {
    bool mean = true;
    bool std_dev = true;
};

// One sample's flattened feature vector. chunk_index is absent for
// full-recording aggregation; feature names carry a __mean / __std suffix.
struct AggregatedVector {
    std::string subject_id;
    std::optional<int> chunk_index;
    std::vector<std::string> feature_names;
    std::vector<double> values;
};

// Per-column mean / sample std over all frames, metadata columns excluded.
// Output is the mean block first, then the std block, each in schema column
// order. population_std switches the divisor from n-1 to n.
AggregatedVector aggregate_full(const FrameTable& table, StatSet stats, bool population_std = false);

struct ChunkSet {
    std::string subject_id;
    double window_s = 0.0;
    std::vector<AggregatedVector> vectors; // chunk_index 0, 1, ...
};

// Splits frames into consecutive non-overlapping windows of
// floor(window_s * fps) frames and emits per-window column means. A trailing
// partial window is discarded.
ChunkSet chunk_and_flatten(const FrameTable& table, double window_s);

// Sample Pearson correlation; returns 0 when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct PruneResult {
    struct Drop {
        int dropped_index;
        int kept_index; // first kept column whose |r| exceeded the threshold
        double abs_r;
    };
    std::vector<int> kept_indices; // strictly increasing
    std::vector<Drop> dropped;
    double threshold = 0.0;
};

// Greedy left-to-right scan in column order: a column is kept iff its |r|
// with every already-kept column is <= threshold.
PruneResult prune_correlated(const Matrix& matrix, double threshold);

// Wide-CSV interchange format: subject_id[, chunk_index], then feature columns.
void write_aggregated_csv(const std::vector<AggregatedVector>& vectors, std::ostream& out);
std::vector<AggregatedVector> read_aggregated_csv(std::istream& in);

} // namespace facecue
